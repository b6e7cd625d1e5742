// scaledim: scale-local Renyi dimension analysis for 2-D point sets.
// File-based pipeline: generate -> scan -> estimate / compare, plus a
// self-contained `check` suite on small instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scaledim/scaledim.hpp"

using nlohmann::json;
using namespace scaledim;

namespace {

struct RunConfig {
  // generator
  std::string generator = "henon";  // henon | lattice | cantor | file
  double a = 1.4;
  double b = 0.3;
  bool seed_given = false;
  double seed_x = 0.0;
  double seed_y = 0.0;
  std::uint64_t rng_seed = 20260810;
  std::uint64_t n_discard = 1000;
  std::uint64_t n_keep = 1000000;
  double escape_bound = 1.8;
  std::uint64_t lattice_m = 1024;
  int cantor_depth = 8;
  int cantor_axes = 1;
  std::string input_path;

  // box and scan
  std::vector<double> box = {-1.8, 1.8, -1.8, 1.8};
  std::uint64_t micro_divisor = 200000;
  int per_decade = 20;
  std::vector<double> log_range = {-4.0, -1.0};
  std::vector<double> q_list = {0, 1, 2, 3, 4, 5};
  std::uint64_t n_offsets = 1;
  std::string estimator = "factorial";
  unsigned threads = 0;

  // estimate
  double est_q = 0.0;
  std::vector<double> l_primes = {0.8, 0.4};  // fractions of L
  std::vector<double> anchors_log10 = {-0.9};
  double l_eff = 1.0;  // fraction of L
  std::vector<double> interval = {-3.0, -1.0};

  // output
  std::string out_dir = ".";
  std::string prefix = "scaledim";
};

json config_to_json(const RunConfig& c) {
  return json{{"generator", c.generator},
              {"a", c.a},
              {"b", c.b},
              {"seed_given", c.seed_given},
              {"seed_x", c.seed_x},
              {"seed_y", c.seed_y},
              {"rng_seed", c.rng_seed},
              {"n_discard", c.n_discard},
              {"n_keep", c.n_keep},
              {"escape_bound", c.escape_bound},
              {"lattice_m", c.lattice_m},
              {"cantor_depth", c.cantor_depth},
              {"cantor_axes", c.cantor_axes},
              {"input_path", c.input_path},
              {"box", c.box},
              {"micro_divisor", c.micro_divisor},
              {"per_decade", c.per_decade},
              {"log_range", c.log_range},
              {"q_list", c.q_list},
              {"n_offsets", c.n_offsets},
              {"estimator", c.estimator},
              {"threads", c.threads},
              {"est_q", c.est_q},
              {"l_primes", c.l_primes},
              {"anchors_log10", c.anchors_log10},
              {"l_eff", c.l_eff},
              {"interval", c.interval},
              {"out_dir", c.out_dir},
              {"prefix", c.prefix}};
}

void config_from_json(const json& j, RunConfig& c) {
  const json& src = j.contains("config") ? j.at("config") : j;
  c.generator = src.value("generator", c.generator);
  c.a = src.value("a", c.a);
  c.b = src.value("b", c.b);
  c.seed_given = src.value("seed_given", c.seed_given);
  c.seed_x = src.value("seed_x", c.seed_x);
  c.seed_y = src.value("seed_y", c.seed_y);
  c.rng_seed = src.value("rng_seed", c.rng_seed);
  c.n_discard = src.value("n_discard", c.n_discard);
  c.n_keep = src.value("n_keep", c.n_keep);
  c.escape_bound = src.value("escape_bound", c.escape_bound);
  c.lattice_m = src.value("lattice_m", c.lattice_m);
  c.cantor_depth = src.value("cantor_depth", c.cantor_depth);
  c.cantor_axes = src.value("cantor_axes", c.cantor_axes);
  c.input_path = src.value("input_path", c.input_path);
  c.box = src.value("box", c.box);
  c.micro_divisor = src.value("micro_divisor", c.micro_divisor);
  c.per_decade = src.value("per_decade", c.per_decade);
  c.log_range = src.value("log_range", c.log_range);
  c.q_list = src.value("q_list", c.q_list);
  c.n_offsets = src.value("n_offsets", c.n_offsets);
  c.estimator = src.value("estimator", c.estimator);
  c.threads = src.value("threads", c.threads);
  c.est_q = src.value("est_q", c.est_q);
  c.l_primes = src.value("l_primes", c.l_primes);
  c.anchors_log10 = src.value("anchors_log10", c.anchors_log10);
  c.l_eff = src.value("l_eff", c.l_eff);
  c.interval = src.value("interval", c.interval);
  c.out_dir = src.value("out_dir", c.out_dir);
  c.prefix = src.value("prefix", c.prefix);
}

Box2 box_from_config(const RunConfig& c) {
  if (c.box.size() != 4)
    throw Error("config field 'box' must hold x_min,x_max,y_min,y_max");
  Box2 box{c.box[0], c.box[1], c.box[2], c.box[3]};
  box.validate();
  return box;
}

void validate_scan_config(const RunConfig& c) {
  if (c.generator != "henon" && c.generator != "lattice" && c.generator != "cantor" &&
      c.generator != "file")
    throw Error("config field 'generator' must be henon, lattice, cantor or file");
  if (c.generator == "file" && c.input_path.empty())
    throw Error("config field 'input_path' is required when generator = file");
  if (c.log_range.size() != 2 || !(c.log_range[0] < c.log_range[1]) || c.log_range[1] > 0.0)
    throw Error("config field 'log_range' must be lo,hi with lo < hi <= 0");
  if (c.q_list.empty()) throw Error("config field 'q_list' must be non-empty");
  for (double q : c.q_list)
    if (q < 0.0) throw Error("config field 'q_list' must contain only q >= 0");
  if (c.n_offsets < 1) throw Error("config field 'n_offsets' must be >= 1");
  if (c.micro_divisor < 2) throw Error("config field 'micro_divisor' must be >= 2");
  if (c.per_decade < 1) throw Error("config field 'per_decade' must be >= 1");
  estimator_from_name(c.estimator);  // throws on bad name
}

Orbit build_orbit(const RunConfig& c, const Box2& box) {
  if (c.generator == "henon") {
    const MapParams params{c.a, c.b};
    Orbit orbit = c.seed_given
                      ? henon_orbit(params, {c.seed_x, c.seed_y}, c.n_discard, c.n_keep,
                                    c.escape_bound)
                      : henon_orbit_seeded(params, c.rng_seed, c.n_discard, c.n_keep,
                                           c.escape_bound);
    for (std::size_t i = 0; i < orbit.points.size(); ++i)
      if (!box.contains(orbit.points[i])) throw PointOutsideBox(i);
    return orbit;
  }
  if (c.generator == "lattice") return uniform_lattice(c.lattice_m, box);
  if (c.generator == "cantor") return cantor_dust(c.cantor_depth, c.cantor_axes, box);
  return io::read_points_csv(c.input_path);
}

std::string out_path(const RunConfig& c, const std::string& suffix) {
  return (std::filesystem::path(c.out_dir) / (c.prefix + suffix)).string();
}

void write_sidecar(const std::string& output_file, const std::string& command,
                   const RunConfig& c, json effective = json::object()) {
  json sidecar{{"tool", "scaledim"},
               {"version", kVersion},
               {"command", command},
               {"output", output_file},
               {"config", config_to_json(c)}};
  if (!effective.empty()) sidecar["effective"] = effective;
  std::ofstream out(output_file + ".meta.json");
  if (!out) throw Error("cannot write sidecar for '" + output_file + "'");
  out << sidecar.dump(2) << '\n';
}

// ---- subcommands ------------------------------------------------------------

int cmd_generate(const RunConfig& c) {
  const Box2 box = box_from_config(c);
  const Orbit orbit = build_orbit(c, box);
  const std::string path = out_path(c, "_points.csv");
  std::filesystem::create_directories(c.out_dir);
  io::write_orbit_csv(orbit, path);
  write_sidecar(path, "generate", c,
                json{{"n_points", orbit.points.size()},
                     {"seed_x", orbit.meta.seed.x},
                     {"seed_y", orbit.meta.seed.y},
                     {"descriptor", orbit.meta.descriptor}});
  std::cout << "wrote " << orbit.points.size() << " points to " << path << '\n';
  return 0;
}

struct ScanResult {
  ScaleScan scan;
  std::string scan_path;
};

ScanResult run_scan(const RunConfig& c) {
  validate_scan_config(c);
  const Box2 box = box_from_config(c);
  const Orbit orbit = build_orbit(c, box);
  const MicroGrid grid = build_microgrid(orbit, box, c.micro_divisor);

  const double margin = micro_margin_decades(grid, c.log_range[0]);
  if (margin < 1.0)
    std::cerr << "warning: micro scale margin is " << margin
              << " decades; the working interval should sit more than one decade above e0\n";

  const auto schedule = scale_schedule(grid, c.per_decade, c.log_range[0], c.log_range[1]);
  ScaleScan scan = entropy_scan(grid, schedule, c.q_list,
                                dither_offsets(c.n_offsets, c.rng_seed),
                                estimator_from_name(c.estimator), c.threads);
  scan.meta.generator = orbit.meta.generator;
  scan.meta.rng_seed = c.rng_seed;

  std::filesystem::create_directories(c.out_dir);
  const std::string scan_path = out_path(c, "_scan.csv");
  io::write_scan_csv(scan, scan_path);
  write_sidecar(scan_path, "scan", c,
                json{{"n_points", grid.n_points},
                     {"scale_points", schedule.size()},
                     {"micro_margin_decades", margin}});
  return ScanResult{std::move(scan), scan_path};
}

int cmd_scan(const RunConfig& c) {
  const ScanResult result = run_scan(c);

  std::vector<DimensionProfile> profiles;
  profiles.reserve(result.scan.qs.size());
  for (double q : result.scan.qs) profiles.push_back(scale_local(result.scan, q));
  const std::string profile_path = out_path(c, "_dimension.csv");
  io::write_profiles_csv(profiles, profile_path);
  write_sidecar(profile_path, "scan", c);

  std::cout << "wrote " << result.scan_path << " (" << result.scan.schedule.size()
            << " scale points x " << result.scan.qs.size() << " q values) and "
            << profile_path << '\n';
  return 0;
}

json profile_to_json(const DimensionProfile& p) {
  return json{{"mid_log10", p.mid_log10}, {"d", p.d}, {"delta_log10", p.delta_log10}};
}

int cmd_estimate(const RunConfig& c, const std::string& scan_file) {
  const ScaleScan scan = io::read_scan_csv(scan_file);
  if (c.interval.size() != 2 || !(c.interval[0] < c.interval[1]))
    throw Error("config field 'interval' must be lo,hi with lo < hi (log10 e/L)");
  if (!(c.l_eff > 0.0) || c.l_eff > 1.0)
    throw Error("config field 'l_eff' must be a fraction of L in (0,1]");
  for (double lp : c.l_primes)
    if (!(lp > 0.0) || lp > 1.0)
      throw Error("config field 'l_primes' entries must be fractions of L in (0,1]");

  std::vector<double> l_primes_abs;
  for (double lp : c.l_primes) l_primes_abs.push_back(lp * scan.boundary);
  std::vector<std::size_t> anchor_idx;
  for (double a : c.anchors_log10) anchor_idx.push_back(nearest_scale_index(scan, a));
  const std::size_t lo_idx = nearest_scale_index(scan, c.interval[0]);
  const std::size_t hi_idx = nearest_scale_index(scan, c.interval[1]);
  if (lo_idx >= hi_idx) throw Error("estimate interval collapses onto one schedule point");

  const EstimatorReport report = make_estimator_report(
      scan, c.est_q, l_primes_abs, anchor_idx, c.l_eff * scan.boundary, lo_idx, hi_idx);

  json j{{"tool", "scaledim"},
         {"version", kVersion},
         {"scan_file", scan_file},
         {"q", report.q},
         {"boundary_L", scan.boundary},
         {"n_offsets", scan.meta.n_offsets},
         {"inputs",
          json{{"l_primes_fraction", c.l_primes},
               {"anchors_log10_requested", c.anchors_log10},
               {"l_eff_fraction", c.l_eff},
               {"interval_log10_requested", c.interval}}},
         {"D_i", profile_to_json(report.d_i)},
         {"chi2_ratio", json{{"l_eff", report.l_eff}, {"value", report.chi2_ratio}}},
         {"fit", json{{"slope", report.fit.slope}, {"intercept", report.fit.intercept}}},
         {"interval_mean", json{{"log10_lo", report.interval_lo_log10},
                                {"log10_hi", report.interval_hi_log10},
                                {"value", report.interval_mean}}}};
  for (const DPrimeCurve& curve : report.d_prime)
    j["D_prime"].push_back(json{{"l_prime", curve.l_prime},
                                {"log10_e", curve.log10_e},
                                {"value", curve.value}});
  for (const AverageProfile& avg : report.d_double_prime)
    j["D_double_prime"].push_back(json{{"anchor_log10", avg.anchor_log10},
                                       {"log10_e", avg.log10_e},
                                       {"dbar", avg.dbar}});

  std::filesystem::create_directories(c.out_dir);
  const std::string path = out_path(c, "_report.json");
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  write_sidecar(path, "estimate", c);

  // plot-ready running averages, one block per anchor
  const std::string running_path = out_path(c, "_running.csv");
  io::write_averages_csv(report.d_double_prime, running_path);
  write_sidecar(running_path, "estimate", c);

  std::cout << "wrote " << path << " and " << running_path << " (interval mean d_"
            << report.q << " = " << report.interval_mean << ")\n";
  return 0;
}

int cmd_compare(const RunConfig& c, const std::string& file_a, const std::string& file_b) {
  const ScaleScan scan_a = io::read_scan_csv(file_a);
  const ScaleScan scan_b = io::read_scan_csv(file_b);
  const TransportProfile profile = dimension_transport(scan_a, scan_b, c.est_q);

  std::filesystem::create_directories(c.out_dir);
  const std::string path = out_path(c, "_transport.csv");
  io::write_transport_csv(profile, path);
  write_sidecar(path, "compare", c,
                json{{"scan_a", file_a},
                     {"scan_b", file_b},
                     {"identity_residual", profile.identity_residual}});
  std::cout << "wrote " << path << " (identity residual " << profile.identity_residual
            << ")\n";
  return 0;
}

// ---- check: small-instance verification suites ------------------------------

struct CheckContext {
  int failures = 0;

  void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) std::cout << ": " << detail;
    std::cout << '\n';
    if (!ok) ++failures;
  }
};

std::vector<std::uint64_t> sorted_counts(const CoarseHistogram& hist) {
  std::vector<std::uint64_t> counts = hist.counts;
  std::sort(counts.begin(), counts.end());
  return counts;
}

void check_oracle_equality(CheckContext& ctx) {
  struct Case {
    std::string name;
    Orbit orbit;
    Box2 box;
    std::uint64_t m;
    std::vector<std::uint64_t> ks;
  };
  std::vector<Case> cases;
  cases.push_back({"oracle equality (henon 1e4)",
                   henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 10000), henon_box(), 20000,
                   {17, 100, 640, 2000}});
  cases.push_back({"oracle equality (lattice 64^2)", uniform_lattice(64, unit_box()),
                   unit_box(), 4800, {75, 300, 1200}});
  cases.push_back({"oracle equality (cantor depth 6)", cantor_dust(6, 1, unit_box()),
                   unit_box(), 6561, {9, 81, 729}});
  for (const Case& tc : cases) {
    const MicroGrid grid = build_microgrid(tc.orbit, tc.box, tc.m);
    bool ok = true;
    std::string detail;
    for (std::uint64_t k : tc.ks) {
      const auto a = sorted_counts(rebin(grid, k));
      const auto b = sorted_counts(
          direct_box_count(tc.orbit, tc.box, static_cast<double>(k) * grid.e0));
      if (a != b) {
        ok = false;
        detail = "multiset mismatch at k = " + std::to_string(k);
        break;
      }
    }
    ctx.report(tc.name, ok, detail);
  }
}

void check_telescoping(CheckContext& ctx) {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 10000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 100000);
  const ScaleScan scan = entropy_scan(grid, scale_schedule(grid, 10, -3.0, -1.0),
                                      {0.0, 1.0, 2.0}, dither_offsets(1, 0));
  bool ok = true;
  std::string detail;
  for (double q : {0.0, 1.0, 2.0}) {
    const DimensionProfile profile = scale_local(scan, q);
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.d.size(); ++i)
      sum += profile.d[i] * profile.delta_log10[i] * 2.302585092994046;
    const std::size_t qi = scan.q_index(q);
    const double target = scan.s_at(0, qi) - scan.s_at(scan.schedule.size() - 1, qi);
    if (std::fabs(sum - target) > 1e-10 * std::fabs(scan.s_at(0, qi))) {
      ok = false;
      detail = "q = " + std::to_string(q);
      break;
    }
  }
  ctx.report("telescoping identity (henon 1e4)", ok, detail);
}

void check_monotonicity(CheckContext& ctx) {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 10000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 100000);
  const std::vector<double> qs{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  const ScaleScan scan = entropy_scan(grid, scale_schedule(grid, 10, -3.0, -1.0), qs,
                                      dither_offsets(1, 0), Estimator::power);
  const MonotonicityReport report =
      monotonicity_report(scan, qs, scan.schedule.size() - 1);
  ctx.report("entropy q-ordering (henon 1e4, power)", report.entropy_ordered,
             std::to_string(report.entropy_violations.size()) + " scale points violate");
}

void check_kullback(CheckContext& ctx) {
  std::mt19937_64 rng(99);
  bool ok = true;
  std::string detail;
  for (int rep = 0; rep < 20 && ok; ++rep) {
    std::vector<std::uint64_t> counts(2 + rng() % 12);
    for (auto& c : counts) c = 1 + rng() % 40;
    CoarseHistogram hist;
    hist.e = 1.0;
    hist.counts = counts;
    for (std::uint64_t c : counts) hist.n_points += c;
    for (double q : {0.5, 2.0, 3.0}) {
      const KullbackResult closed = kullback_check(hist, q);
      const double fd = q_derivative_fd(hist, q, 1e-3);
      if (closed.kullback < -1e-12 || std::fabs(fd - closed.ds_dq) > 1e-4) {
        ok = false;
        detail = "q = " + std::to_string(q) + " at rep " + std::to_string(rep);
        break;
      }
    }
  }
  ctx.report("kullback sum vs finite difference (20 random histograms)", ok, detail);
}

void check_conservation(CheckContext& ctx) {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 5000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 5000);
  std::mt19937_64 rng(7);
  bool ok = true;
  for (std::uint64_t k : {1ull, 3ull, 50ull, 999ull, 5000ull}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Offset offset{uniform_unit(rng), uniform_unit(rng)};
      const CoarseHistogram hist = rebin(grid, k, offset);
      std::uint64_t total = 0;
      for (std::uint64_t c : hist.counts) total += c;
      ok = ok && total == grid.n_points;
    }
  }
  ctx.report("count conservation across k and offsets", ok);
}

int cmd_check() {
  CheckContext ctx;
  check_oracle_equality(ctx);
  check_telescoping(ctx);
  check_monotonicity(ctx);
  check_kullback(ctx);
  check_conservation(ctx);
  if (ctx.failures == 0) {
    std::cout << "all checks passed\n";
    return 0;
  }
  std::cout << ctx.failures << " check(s) failed\n";
  return 1;
}

std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") return argv[i + 1];
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // a sidecar or config file preloads every option; explicit flags override
  const std::string config_path = find_config_path(argc, argv);
  if (!config_path.empty()) {
    try {
      std::ifstream in(config_path);
      if (!in) throw Error("cannot open config file '" + config_path + "'");
      json j;
      in >> j;
      config_from_json(j, cfg);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  CLI::App app{"scale-local Renyi dimension analysis for 2-D point distributions"};
  app.require_subcommand(1);
  std::string config_opt;

  auto add_config_option = [&config_opt](CLI::App* cmd) {
    cmd->add_option("--config", config_opt, "JSON config or sidecar to preload")
        ->expected(1);
  };
  add_config_option(&app);

  auto add_generator_options = [&cfg](CLI::App* cmd) {
    cmd->add_option("--map", cfg.generator, "map generator (henon)");
    cmd->add_option("--synthetic", cfg.generator, "synthetic generator (lattice|cantor)");
    cmd->add_option("--a", cfg.a, "Henon parameter a");
    cmd->add_option("--b", cfg.b, "Henon parameter b");
    auto* seed = cmd->add_option(
        "--seed-xy", [&cfg](const std::vector<std::string>& vals) {
          const auto comma = vals[0].find(',');
          if (comma == std::string::npos) return false;
          cfg.seed_x = std::stod(vals[0].substr(0, comma));
          cfg.seed_y = std::stod(vals[0].substr(comma + 1));
          cfg.seed_given = true;
          return true;
        },
        "explicit Henon seed x,y (default: random basin seed)");
    seed->expected(1);
    cmd->add_option("--rng-seed", cfg.rng_seed, "RNG seed for seeding and dithering");
    cmd->add_option("--discard", cfg.n_discard, "transient iterations to discard");
    cmd->add_option("--keep", cfg.n_keep, "orbit points to keep");
    cmd->add_option("--escape-bound", cfg.escape_bound, "trapping square half-size");
    cmd->add_option("--m", cfg.lattice_m, "lattice points per side");
    cmd->add_option("--depth", cfg.cantor_depth, "cantor construction depth");
    cmd->add_option("--axes", cfg.cantor_axes, "cantor axes (1 or 2)");
    cmd->add_option("--box", cfg.box, "analysis box x_min,x_max,y_min,y_max")
        ->delimiter(',')
        ->expected(1, 4);
    cmd->add_option("--out-dir", cfg.out_dir, "output directory");
    cmd->add_option("--prefix", cfg.prefix, "output file prefix");
  };

  auto add_scan_options = [&cfg](CLI::App* cmd) {
    cmd->add_option("--micro-divisor", cfg.micro_divisor, "micro cells per side");
    cmd->add_option("--per-decade", cfg.per_decade, "scale points per decade");
    cmd->add_option("--log-range", cfg.log_range, "working interval lo,hi in log10(e/L)")
        ->delimiter(',')
        ->expected(1, 2);
    cmd->add_option("--q", cfg.q_list, "q values, comma separated")
        ->delimiter(',')
        ->expected(1, 64);
    cmd->add_option("--offsets", cfg.n_offsets, "dither offsets (1 = aligned only)");
    cmd->add_option("--estimator", cfg.estimator, "factorial|power for integer q >= 2");
    cmd->add_option("--threads", cfg.threads, "worker cap (0 = hardware)");
  };

  CLI::App* generate = app.add_subcommand("generate", "write an orbit point file");
  add_config_option(generate);
  add_generator_options(generate);

  CLI::App* scan = app.add_subcommand("scan", "entropy scan and dimension profile");
  add_config_option(scan);
  add_generator_options(scan);
  add_scan_options(scan);
  std::string input_file;
  scan->add_option("--input", input_file, "read points from CSV instead of generating");

  CLI::App* estimate = app.add_subcommand("estimate", "estimator family from a scan");
  add_config_option(estimate);
  std::string scan_file;
  estimate->add_option("--scan", scan_file, "scan CSV produced by `scan`")->required();
  estimate->add_option("--q", cfg.est_q, "q row to analyze");
  estimate->add_option("--lprime", cfg.l_primes, "reduced boundaries as fractions of L")
      ->delimiter(',')
      ->expected(1, 16);
  estimate->add_option("--anchor-log10", cfg.anchors_log10,
                       "running-average anchors, log10(e/L)")
      ->delimiter(',')
      ->expected(1, 16);
  estimate->add_option("--leff", cfg.l_eff, "chi2-ratio boundary as a fraction of L");
  estimate->add_option("--interval", cfg.interval, "interval-mean bounds lo,hi in log10(e/L)")
      ->delimiter(',')
      ->expected(1, 2);
  estimate->add_option("--out-dir", cfg.out_dir, "output directory");
  estimate->add_option("--prefix", cfg.prefix, "output file prefix");

  CLI::App* compare = app.add_subcommand("compare", "dimension transport between two scans");
  add_config_option(compare);
  std::string scan_a, scan_b;
  compare->add_option("--scan-a", scan_a, "reference scan CSV")->required();
  compare->add_option("--scan-b", scan_b, "comparison scan CSV")->required();
  compare->add_option("--q", cfg.est_q, "q row to compare");
  compare->add_option("--out-dir", cfg.out_dir, "output directory");
  compare->add_option("--prefix", cfg.prefix, "output file prefix");

  CLI::App* check = app.add_subcommand("check", "run the small-instance verification suite");
  (void)check;

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(generate)) return cmd_generate(cfg);
    if (app.got_subcommand(scan)) {
      if (!input_file.empty()) {
        cfg.generator = "file";
        cfg.input_path = input_file;
      }
      return cmd_scan(cfg);
    }
    if (app.got_subcommand(estimate)) return cmd_estimate(cfg, scan_file);
    if (app.got_subcommand(compare)) return cmd_compare(cfg, scan_a, scan_b);
    return cmd_check();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
