#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tenrec/media.hpp"
#include "tenrec/nonlocal.hpp"
#include "tenrec/solvers.hpp"

namespace tenrec::cli {

struct SolverFlags {
  std::optional<double> lambda;
  double mu0 = 1e-3;
  double mu_max = 1e10;
  double rho = 1.1;
  double eps = 1e-5;
  double theta = 2.0;
  int max_iters = 500;

  SolverConfig to_config() const;
};

struct GroupFlags {
  Index patch = 10;
  Index group_size = 100;
  std::optional<Index> stride;
  std::string grouping = "unfold1";  // unfold1 | mode3

  GroupingConfig to_config() const;
};

struct NoiseFlags {
  double rate = 0.0;
  std::uint64_t seed = 0;
  double low = 0.0;
  double high = 255.0;
  bool uncoupled = false;

  NoiseSpec to_spec() const;
};

struct CorruptArgs {
  std::string in;
  std::string out;
  std::string mask;      // optional mask output
  std::string manifest;  // empty means <out>.manifest.json
  Index frames = 0;
  NoiseFlags noise;
  double resize_scale = 1.0;
  std::string filter = "bilinear";
};

struct RecoverArgs {
  std::string in;
  std::string out;
  std::string method;    // tnn | ntrpca | nntrpca
  std::string report;    // empty means <out>.report.json
  std::string manifest;  // empty means <out>.manifest.json
  Index frames = 0;
  SolverFlags solver;
  GroupFlags grouping;
};

struct BenchArgs {
  std::string ref;
  std::string in;  // corrupted input; empty means corrupt ref with noise
  std::string csv;
  std::string manifest;  // empty means <csv>.manifest.json
  Index frames = 0;
  std::vector<std::string> methods;
  NoiseFlags noise;
  SolverFlags solver;
  GroupFlags grouping;
  double peak = 255.0;
};

struct SweepArgs {
  BenchArgs bench;
  std::string param;  // theta | p | m
  std::vector<double> values;
};

int cmd_corrupt(const CorruptArgs& args);
int cmd_recover(const RecoverArgs& args);
int cmd_bench(const BenchArgs& args);
int cmd_sweep(const SweepArgs& args);

/// Re-executes the command a manifest records; outputs land on the paths
/// the manifest names. Timing fields are measured fresh, everything else
/// reproduces bitwise.
int cmd_replay(const std::string& manifest_path);

}  // namespace tenrec::cli
