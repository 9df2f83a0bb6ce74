#include <CLI11.hpp>

#include <json.hpp>

#include <exception>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "tenrec/errors.hpp"

namespace {

using namespace tenrec;
using namespace tenrec::cli;

void add_solver_flags(CLI::App* sub, SolverFlags& s, double& lambda_in,
                      CLI::Option*& lambda_opt) {
  lambda_opt = sub->add_option("--lambda", lambda_in,
                               "sparsity weight (default 1/sqrt(max(n1,n2)*n3))");
  sub->add_option("--mu0", s.mu0, "initial penalty")->capture_default_str();
  sub->add_option("--mu-max", s.mu_max, "penalty cap")->capture_default_str();
  sub->add_option("--rho", s.rho, "penalty growth factor")->capture_default_str();
  sub->add_option("--eps", s.eps, "convergence tolerance")->capture_default_str();
  sub->add_option("--theta", s.theta, "log-penalty sharpness")->capture_default_str();
  sub->add_option("--max-iters", s.max_iters, "iteration cap")->capture_default_str();
}

void add_group_flags(CLI::App* sub, GroupFlags& g, Index& stride_in,
                     CLI::Option*& stride_opt) {
  sub->add_option("--patch", g.patch, "patch edge length")->capture_default_str();
  sub->add_option("--group-size", g.group_size, "patches per group")->capture_default_str();
  stride_opt = sub->add_option("--stride", stride_in,
                               "reference grid step (default patch/2)");
  sub->add_option("--grouping", g.grouping,
                  "patch stacking: unfold1 (m x p^2 x n3) or mode3 (p x p x m*n3)")->capture_default_str()
      ->check(CLI::IsMember({"unfold1", "mode3"}));
}

void add_noise_flags(CLI::App* sub, NoiseFlags& n, bool rate_required) {
  auto* rate = sub->add_option("--rate", n.rate, "fraction of corrupted pixels")
                   ->check(CLI::Range(0.0, 1.0));
  if (rate_required) rate->required();
  sub->add_option("--seed", n.seed, "noise generator seed")->capture_default_str();
  sub->add_option("--low", n.low, "noise value range lower bound")->capture_default_str();
  sub->add_option("--high", n.high, "noise value range upper bound")->capture_default_str();
  sub->add_flag("--uncoupled", n.uncoupled,
                "draw corrupted positions per slice instead of per pixel");
}

int run(int argc, char** argv) {
  CLI::App app{"low-rank + sparse tensor recovery"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  CorruptArgs corrupt;
  RecoverArgs recover;
  BenchArgs bench;
  SweepArgs sweep;
  std::string replay_manifest;

  double lambda_in[3] = {0, 0, 0};
  Index stride_in[3] = {0, 0, 0};
  CLI::Option* lambda_opt[3] = {nullptr, nullptr, nullptr};
  CLI::Option* stride_opt[3] = {nullptr, nullptr, nullptr};
  int exit_code = 0;

  CLI::App* c = app.add_subcommand("corrupt", "inject impulse noise");
  c->add_option("--in", corrupt.in, "source image, video pattern, or .t3rc")
      ->required();
  c->add_option("--out", corrupt.out, "corrupted output path")->required();
  c->add_option("--mask", corrupt.mask, "corruption mask output path");
  c->add_option("--frames", corrupt.frames, "frame count for video patterns");
  c->add_option("--manifest", corrupt.manifest,
                "manifest path (default <out>.manifest.json)");
  add_noise_flags(c, corrupt.noise, true);
  c->add_option("--resize", corrupt.resize_scale,
                "spatial rescale factor applied before corruption")->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--filter", corrupt.filter, "resampling filter")->capture_default_str()
      ->check(CLI::IsMember({"nearest", "bilinear"}));
  c->callback([&] { exit_code = cmd_corrupt(corrupt); });

  CLI::App* r = app.add_subcommand("recover", "low-rank + sparse decomposition");
  r->add_option("--in", recover.in, "corrupted image, video pattern, or .t3rc")
      ->required();
  r->add_option("--out", recover.out, "restored output path")->required();
  r->add_option("--method", recover.method, "tnn, ntrpca, or nntrpca")
      ->required()
      ->check(CLI::IsMember({"tnn", "ntrpca", "nntrpca"}));
  r->add_option("--frames", recover.frames, "frame count for video patterns");
  r->add_option("--report", recover.report,
                "solver report path (default <out>.report.json)");
  r->add_option("--manifest", recover.manifest,
                "manifest path (default <out>.manifest.json)");
  add_solver_flags(r, recover.solver, lambda_in[0], lambda_opt[0]);
  add_group_flags(r, recover.grouping, stride_in[0], stride_opt[0]);
  r->callback([&] {
    if (lambda_opt[0]->count() > 0) recover.solver.lambda = lambda_in[0];
    if (stride_opt[0]->count() > 0) recover.grouping.stride = stride_in[0];
    exit_code = cmd_recover(recover);
  });

  CLI::App* b = app.add_subcommand(
      "bench", "run methods on one corrupted input and append quality rows");
  b->add_option("--ref", bench.ref, "clean reference")->required();
  b->add_option("--in", bench.in,
                "corrupted input (omit to corrupt the reference in memory)");
  b->add_option("--csv", bench.csv, "csv output path")->required();
  b->add_option("--methods", bench.methods, "comma-separated method list")
      ->required()
      ->delimiter(',');
  b->add_option("--frames", bench.frames, "frame count for video patterns");
  b->add_option("--peak", bench.peak, "psnr peak value")->capture_default_str();
  b->add_option("--manifest", bench.manifest,
                "manifest path (default <csv>.manifest.json)");
  add_noise_flags(b, bench.noise, false);
  add_solver_flags(b, bench.solver, lambda_in[1], lambda_opt[1]);
  add_group_flags(b, bench.grouping, stride_in[1], stride_opt[1]);
  b->callback([&] {
    if (lambda_opt[1]->count() > 0) bench.solver.lambda = lambda_in[1];
    if (stride_opt[1]->count() > 0) bench.grouping.stride = stride_in[1];
    exit_code = cmd_bench(bench);
  });

  CLI::App* s = app.add_subcommand(
      "sweep", "repeat bench over a parameter grid");
  s->add_option("--param", sweep.param, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"theta", "p", "m"}));
  s->add_option("--values", sweep.values, "comma-separated value list")
      ->required()
      ->delimiter(',');
  s->add_option("--ref", sweep.bench.ref, "clean reference")->required();
  s->add_option("--in", sweep.bench.in,
                "corrupted input (omit to corrupt the reference in memory)");
  s->add_option("--csv", sweep.bench.csv, "csv output path")->required();
  s->add_option("--methods", sweep.bench.methods,
                "comma-separated method list (default nntrpca)")
      ->delimiter(',');
  s->add_option("--frames", sweep.bench.frames,
                "frame count for video patterns");
  s->add_option("--peak", sweep.bench.peak, "psnr peak value")->capture_default_str();
  s->add_option("--manifest", sweep.bench.manifest,
                "manifest path (default <csv>.manifest.json)");
  add_noise_flags(s, sweep.bench.noise, false);
  add_solver_flags(s, sweep.bench.solver, lambda_in[2], lambda_opt[2]);
  add_group_flags(s, sweep.bench.grouping, stride_in[2], stride_opt[2]);
  s->callback([&] {
    if (lambda_opt[2]->count() > 0) sweep.bench.solver.lambda = lambda_in[2];
    if (stride_opt[2]->count() > 0) sweep.bench.grouping.stride = stride_in[2];
    if (sweep.bench.methods.empty()) sweep.bench.methods = {"nntrpca"};
    exit_code = cmd_sweep(sweep);
  });

  CLI::App* p = app.add_subcommand("replay", "re-run a recorded manifest");
  p->add_option("--manifest", replay_manifest, "manifest to re-execute")
      ->required();
  p->callback([&] { exit_code = cmd_replay(replay_manifest); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const InconsistentFrameSize& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const NonRealResult& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    // configuration and shape problems are usage errors
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 4;
  }
}
