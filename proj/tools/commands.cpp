#include "commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "media_io.hpp"
#include "tenrec/errors.hpp"
#include "tenrec/metrics.hpp"

namespace tenrec::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", s);
  return buf;
}

std::string default_path(const std::string& explicit_path,
                         const std::string& base, const char* suffix) {
  return explicit_path.empty() ? base + suffix : explicit_path;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void write_manifest(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// --- flag blocks <-> json ----------------------------------------------------

json noise_json(const NoiseFlags& n) {
  return {{"rate", n.rate},
          {"seed", n.seed},
          {"low", n.low},
          {"high", n.high},
          {"channel_coupled", !n.uncoupled}};
}

NoiseFlags noise_from(const json& j) {
  NoiseFlags n;
  n.rate = j.at("rate").get<double>();
  n.seed = j.at("seed").get<std::uint64_t>();
  n.low = j.at("low").get<double>();
  n.high = j.at("high").get<double>();
  n.uncoupled = !j.at("channel_coupled").get<bool>();
  return n;
}

json solver_json(const SolverFlags& s) {
  json j{{"mu0", s.mu0},         {"mu_max", s.mu_max},
         {"rho", s.rho},         {"epsilon", s.eps},
         {"theta", s.theta},     {"max_iters", s.max_iters}};
  j["lambda"] = s.lambda ? json(*s.lambda) : json(nullptr);
  return j;
}

SolverFlags solver_from(const json& j) {
  SolverFlags s;
  if (!j.at("lambda").is_null()) s.lambda = j.at("lambda").get<double>();
  s.mu0 = j.at("mu0").get<double>();
  s.mu_max = j.at("mu_max").get<double>();
  s.rho = j.at("rho").get<double>();
  s.eps = j.at("epsilon").get<double>();
  s.theta = j.at("theta").get<double>();
  s.max_iters = j.at("max_iters").get<int>();
  return s;
}

json group_json(const GroupFlags& g) {
  json j{{"p", g.patch}, {"m", g.group_size}, {"method", g.grouping}};
  j["stride"] = g.stride ? json(*g.stride) : json(nullptr);
  return j;
}

GroupFlags group_from(const json& j) {
  GroupFlags g;
  g.patch = j.at("p").get<Index>();
  g.group_size = j.at("m").get<Index>();
  if (!j.at("stride").is_null()) g.stride = j.at("stride").get<Index>();
  g.grouping = j.at("method").get<std::string>();
  return g;
}

// --- solving -----------------------------------------------------------------

Decomposition solve_one(const std::string& method, const Tensor3& x,
                        const SolverConfig& scfg, const GroupingConfig& gcfg) {
  if (method == "tnn") return tnn_trpca(x, scfg);
  if (method == "ntrpca") return n_trpca(x, scfg);
  if (method == "nntrpca") return nn_trpca(x, gcfg, scfg);
  throw InvalidConfig("unknown method: " + method +
                      " (want tnn, ntrpca, or nntrpca)");
}

void check_methods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw InvalidConfig("methods list is empty");
  for (const std::string& m : methods) {
    if (m != "tnn" && m != "ntrpca" && m != "nntrpca") {
      throw InvalidConfig("unknown method: " + m +
                          " (want tnn, ntrpca, or nntrpca)");
    }
  }
}

// --- csv ----------------------------------------------------------------------

struct BenchRow {
  std::string input, method, param, value, noise_rate, seed;
  std::string psnr, ssim, iterations, seconds, status;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void append_rows(const std::string& path, const std::vector<BenchRow>& rows) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) ||
                     std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path + " for writing");
  if (fresh) {
    out << "schema_version,input,method,param,value,noise_rate,seed,psnr,"
           "ssim,iterations,seconds,status\n";
  }
  for (const BenchRow& r : rows) {
    out << "1," << csv_escape(r.input) << ',' << r.method << ',' << r.param
        << ',' << r.value << ',' << r.noise_rate << ',' << r.seed << ','
        << r.psnr << ',' << r.ssim << ',' << r.iterations << ',' << r.seconds
        << ',' << csv_escape(r.status) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

BenchRow run_row(const Tensor3& ref, const Tensor3& corrupted,
                 bool image_scale, const std::string& method,
                 const SolverConfig& scfg, const GroupingConfig& gcfg,
                 double peak) {
  BenchRow row;
  row.method = method;
  const auto t0 = Clock::now();
  try {
    Tensor3 x = corrupted;
    if (image_scale) x *= 1.0 / 255.0;
    Decomposition dec = solve_one(method, x, scfg, gcfg);
    Tensor3 est = std::move(dec.low_rank);
    if (image_scale) est *= 255.0;
    row.psnr = format_metric(psnr(ref, est, peak));
    try {
      row.ssim = format_metric(ssim(ref, est));
    } catch (const TooSmall&) {
      // spatial dims below the ssim window; leave the column empty
    }
    row.iterations = std::to_string(dec.report.iterations);
    row.status = dec.report.converged ? "ok" : "ok(max_iters)";
  } catch (const Error& err) {
    row.status = std::string("error: ") + err.what();
  }
  row.seconds = format_seconds(seconds_since(t0));
  return row;
}

// --- shared bench setup --------------------------------------------------------

struct BenchSetup {
  Tensor3 ref;
  Tensor3 corrupted;
  bool image_scale = false;
  std::string input_label;
  bool generated = false;
};

BenchSetup prepare_bench(const BenchArgs& args) {
  check_methods(args.methods);
  BenchSetup setup;
  setup.image_scale = classify_path(args.ref) != MediaKind::RawTensor;
  setup.ref = load_any(args.ref, args.frames);
  setup.generated = args.in.empty();
  if (setup.generated) {
    setup.corrupted = inject_noise(setup.ref, args.noise.to_spec()).corrupted;
    setup.input_label = args.ref;
  } else {
    setup.corrupted = load_any(args.in, args.frames);
    setup.ref.require_same_dims(setup.corrupted,
                                "bench reference vs corrupted");
    setup.input_label = args.in;
  }
  return setup;
}

void stamp_source(BenchRow& row, const BenchSetup& setup,
                  const NoiseFlags& noise) {
  row.input = setup.input_label;
  if (setup.generated) {
    row.noise_rate = format_metric(noise.rate);
    row.seed = std::to_string(noise.seed);
  }
}

json bench_json(const BenchArgs& args) {
  return {{"command", "bench"},
          {"reference", args.ref},
          {"input", args.in},
          {"csv", args.csv},
          {"frames", args.frames},
          {"methods", args.methods},
          {"noise", noise_json(args.noise)},
          {"solver", solver_json(args.solver)},
          {"grouping", group_json(args.grouping)},
          {"peak", args.peak}};
}

BenchArgs bench_from(const json& j) {
  BenchArgs a;
  a.ref = j.at("reference").get<std::string>();
  a.in = j.at("input").get<std::string>();
  a.csv = j.at("csv").get<std::string>();
  a.manifest = j.at("manifest").get<std::string>();
  a.frames = j.at("frames").get<Index>();
  a.methods = j.at("methods").get<std::vector<std::string>>();
  a.noise = noise_from(j.at("noise"));
  a.solver = solver_from(j.at("solver"));
  a.grouping = group_from(j.at("grouping"));
  a.peak = j.at("peak").get<double>();
  return a;
}

}  // namespace

SolverConfig SolverFlags::to_config() const {
  SolverConfig c;
  c.lambda = lambda;
  c.mu0 = mu0;
  c.mu_max = mu_max;
  c.rho = rho;
  c.epsilon = eps;
  c.theta = theta;
  c.max_iters = max_iters;
  return c;
}

GroupingConfig GroupFlags::to_config() const {
  GroupingConfig g;
  g.p = patch;
  g.m = group_size;
  g.stride = stride;
  if (grouping == "mode3") {
    g.method = GroupMethod::StackMode3;
  } else if (grouping == "unfold1") {
    g.method = GroupMethod::UnfoldStackMode1;
  } else {
    throw InvalidConfig("grouping must be mode3 or unfold1, got " + grouping);
  }
  return g;
}

NoiseSpec NoiseFlags::to_spec() const {
  NoiseSpec spec;
  spec.rate = rate;
  spec.seed = seed;
  spec.low = low;
  spec.high = high;
  spec.channel_coupled = !uncoupled;
  return spec;
}

int cmd_corrupt(const CorruptArgs& args) {
  const auto t0 = Clock::now();
  Tensor3 x = load_any(args.in, args.frames);
  x = resize(x, args.resize_scale, args.filter);
  const NoiseResult noise = inject_noise(x, args.noise.to_spec());
  save_any(noise.corrupted, args.out);
  if (!args.mask.empty()) {
    const bool raw = classify_path(args.mask) == MediaKind::RawTensor;
    save_any(raw ? noise.mask : 255.0 * noise.mask, args.mask);
  }

  const std::string manifest_path =
      default_path(args.manifest, args.out, ".manifest.json");
  json j{{"command", "corrupt"},
         {"input", args.in},
         {"output", args.out},
         {"mask", args.mask},
         {"frames", args.frames},
         {"noise", noise_json(args.noise)},
         {"resize", {{"scale", args.resize_scale}, {"filter", args.filter}}},
         {"manifest", manifest_path}};
  j["wall_time"] = seconds_since(t0);
  write_manifest(manifest_path, j);
  return 0;
}

int cmd_recover(const RecoverArgs& args) {
  const auto t0 = Clock::now();
  const bool image_scale = classify_path(args.in) != MediaKind::RawTensor;
  Tensor3 x = load_any(args.in, args.frames);
  if (image_scale) x *= 1.0 / 255.0;

  Decomposition dec = solve_one(args.method, x, args.solver.to_config(),
                                args.grouping.to_config());
  Tensor3 restored = std::move(dec.low_rank);
  if (image_scale) restored *= 255.0;
  save_any(restored, args.out);

  const std::string report_path =
      default_path(args.report, args.out, ".report.json");
  write_text(report_path, to_json_string(dec.report) + "\n");

  const std::string manifest_path =
      default_path(args.manifest, args.out, ".manifest.json");
  json j{{"command", "recover"},
         {"input", args.in},
         {"output", args.out},
         {"method", args.method},
         {"report", report_path},
         {"frames", args.frames},
         {"solver", solver_json(args.solver)},
         {"grouping", group_json(args.grouping)},
         {"manifest", manifest_path}};
  j["wall_time"] = seconds_since(t0);
  write_manifest(manifest_path, j);
  return 0;
}

int cmd_bench(const BenchArgs& args) {
  const auto t0 = Clock::now();
  const BenchSetup setup = prepare_bench(args);
  const SolverConfig scfg = args.solver.to_config();
  const GroupingConfig gcfg = args.grouping.to_config();

  std::vector<BenchRow> rows;
  for (const std::string& method : args.methods) {
    BenchRow row = run_row(setup.ref, setup.corrupted, setup.image_scale,
                           method, scfg, gcfg, args.peak);
    stamp_source(row, setup, args.noise);
    rows.push_back(std::move(row));
  }
  append_rows(args.csv, rows);

  const std::string manifest_path =
      default_path(args.manifest, args.csv, ".manifest.json");
  json j = bench_json(args);
  j["manifest"] = manifest_path;
  j["wall_time"] = seconds_since(t0);
  write_manifest(manifest_path, j);
  return 0;
}

int cmd_sweep(const SweepArgs& args) {
  const auto t0 = Clock::now();
  if (args.param != "theta" && args.param != "p" && args.param != "m") {
    throw InvalidConfig("sweep parameter must be theta, p, or m, got " +
                        args.param);
  }
  if (args.values.empty()) throw InvalidConfig("sweep values list is empty");
  if (args.param != "theta") {
    for (double v : args.values) {
      if (v != std::floor(v) || v < 1.0) {
        std::ostringstream msg;
        msg << args.param << " sweep values must be positive integers, got "
            << v;
        throw InvalidConfig(msg.str());
      }
    }
  }

  const BenchSetup setup = prepare_bench(args.bench);
  std::vector<BenchRow> rows;
  for (const std::string& method : args.bench.methods) {
    for (double v : args.values) {
      SolverFlags sf = args.bench.solver;
      GroupFlags gf = args.bench.grouping;
      if (args.param == "theta") sf.theta = v;
      if (args.param == "p") gf.patch = static_cast<Index>(v);
      if (args.param == "m") gf.group_size = static_cast<Index>(v);
      BenchRow row = run_row(setup.ref, setup.corrupted, setup.image_scale,
                             method, sf.to_config(), gf.to_config(),
                             args.bench.peak);
      stamp_source(row, setup, args.bench.noise);
      row.param = args.param;
      row.value = format_metric(v);
      rows.push_back(std::move(row));
    }
  }
  append_rows(args.bench.csv, rows);

  const std::string manifest_path =
      default_path(args.bench.manifest, args.bench.csv, ".manifest.json");
  json j = bench_json(args.bench);
  j["command"] = "sweep";
  j["param"] = args.param;
  j["values"] = args.values;
  j["manifest"] = manifest_path;
  j["wall_time"] = seconds_since(t0);
  write_manifest(manifest_path, j);
  return 0;
}

int cmd_replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("bad manifest json: " + std::string(e.what()));
  }

  std::function<int()> run;
  try {
    const std::string command = j.at("command").get<std::string>();
    if (command == "corrupt") {
      CorruptArgs a;
      a.in = j.at("input").get<std::string>();
      a.out = j.at("output").get<std::string>();
      a.mask = j.at("mask").get<std::string>();
      a.manifest = j.at("manifest").get<std::string>();
      a.frames = j.at("frames").get<Index>();
      a.noise = noise_from(j.at("noise"));
      a.resize_scale = j.at("resize").at("scale").get<double>();
      a.filter = j.at("resize").at("filter").get<std::string>();
      run = [a] { return cmd_corrupt(a); };
    } else if (command == "recover") {
      RecoverArgs a;
      a.in = j.at("input").get<std::string>();
      a.out = j.at("output").get<std::string>();
      a.method = j.at("method").get<std::string>();
      a.report = j.at("report").get<std::string>();
      a.manifest = j.at("manifest").get<std::string>();
      a.frames = j.at("frames").get<Index>();
      a.solver = solver_from(j.at("solver"));
      a.grouping = group_from(j.at("grouping"));
      run = [a] { return cmd_recover(a); };
    } else if (command == "bench") {
      const BenchArgs a = bench_from(j);
      run = [a] { return cmd_bench(a); };
    } else if (command == "sweep") {
      SweepArgs a;
      a.bench = bench_from(j);
      a.param = j.at("param").get<std::string>();
      a.values = j.at("values").get<std::vector<double>>();
      run = [a] { return cmd_sweep(a); };
    } else {
      throw FormatError("manifest names unknown command: " + command);
    }
  } catch (const json::exception& e) {
    throw FormatError("manifest field error: " + std::string(e.what()));
  }
  return run();
}

}  // namespace tenrec::cli
