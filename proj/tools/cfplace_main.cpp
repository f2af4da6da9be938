#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <cfplace/config_io.hpp>
#include <cfplace/examples1d.hpp>
#include <cfplace/experiments.hpp>
#include <cfplace/format.hpp>
#include <cfplace/metrics.hpp>
#include <cfplace/scenario.hpp>

namespace fs = std::filesystem;

namespace {

using namespace cfplace;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<int> mc_iters;
  std::optional<int> restarts;
};

void add_output_flags(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--out", o.out_dir, "output directory (created if missing)");
  sub->add_flag("--quiet", o.quiet, "suppress progress output");
}

void add_override_flags(CLI::App* sub, CommonOpts& o, bool with_method) {
  sub->add_option("--seed", o.seed, "override config seed");
  if (with_method) sub->add_option("--method", o.method, "override config method");
  sub->add_option("--mc-iters", o.mc_iters, "override Monte Carlo iteration count");
  sub->add_option("--restarts", o.restarts, "override codebook training restarts");
}

void add_config_flag(CLI::App* sub, CommonOpts& o, bool required) {
  CLI::Option* c =
      sub->add_option("--config", o.config_path, "JSON experiment config")
          ->check(CLI::ExistingFile);
  if (required) c->required();
}

void apply_overrides(ExperimentConfig& cfg, const CommonOpts& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.method) cfg.method = parse_method(*o.method);
  if (o.mc_iters) cfg.mc_iterations = *o.mc_iters;
  if (o.restarts) cfg.restarts = *o.restarts;
  cfg.validate();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void say(const CommonOpts& o, const std::string& line) {
  if (!o.quiet) std::cout << line << '\n';
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::string improvement_line(const ImprovementRow& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "  %s vs %s, %s: %+.2f%% (%.4g -> %.4g)",
                r.candidate.c_str(), r.baseline.c_str(), r.metric.c_str(),
                r.improvement_pct, r.base_value, r.new_value);
  return std::string(buf);
}

void write_runs(const fs::path& out, const ExperimentResult& res, RunManifest& man) {
  for (const MethodRun& run : res.runs) {
    const fs::path pj = out / ("placement_" + run.label + ".json");
    write_placement_json(pj, run.placement, run.label, run.report.seed);
    man.outputs.push_back(pj.string());
    const fs::path rc = out / ("rates_" + run.label + ".csv");
    write_rates_csv(rc, run.report);
    man.outputs.push_back(rc.string());
    const fs::path rj = out / ("rates_" + run.label + ".json");
    write_rates_json(rj, run.report, run.label);
    man.outputs.push_back(rj.string());
  }
  if (!res.improvements.empty()) {
    const fs::path ic = out / "improvements.csv";
    write_improvements_csv(ic, res.improvements);
    man.outputs.push_back(ic.string());
  }
}

void finish_manifest(const fs::path& out, RunManifest& man, const CommonOpts& o) {
  const fs::path mf = out / "manifest.json";
  write_manifest(mf, man);
  for (const std::string& path : man.outputs) say(o, "wrote " + path);
  say(o, "wrote " + mf.string());
  for (const auto& [name, seconds] : man.timings_sec) {
    std::ostringstream line;
    line << name << " took " << std::fixed << std::setprecision(2) << seconds << " s";
    say(o, line.str());
  }
}

int cmd_place(const CommonOpts& o) {
  ExperimentConfig cfg = load_config_file(o.config_path);
  apply_overrides(cfg, o);
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const auto t0 = Clock::now();
  const Placement aps = make_placement(cfg);
  RunManifest man;
  man.config_hash = config_hash(cfg);
  man.seed = cfg.seed;
  man.method = method_name(cfg.method);
  const fs::path pj = out / "placement.json";
  write_placement_json(pj, aps, man.method, cfg.seed);
  man.outputs.push_back(pj.string());
  man.timings_sec.emplace_back("place", seconds_since(t0));
  finish_manifest(out, man, o);
  return 0;
}

int cmd_evaluate(const CommonOpts& o, const std::string& placement_path) {
  ExperimentConfig cfg = load_config_file(o.config_path);
  apply_overrides(cfg, o);
  const Placement aps = read_placement_json(placement_path);
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const auto t0 = Clock::now();
  const RateReport report =
      evaluate_placement(aps, cfg.density(), cfg.channel, cfg.num_users_eval,
                         cfg.power_grid_db, cfg.mc_iterations, cfg.seed);
  RunManifest man;
  man.config_hash = config_hash(cfg);
  man.seed = cfg.seed;
  man.method = method_name(cfg.method);
  const fs::path rc = out / "rates.csv";
  write_rates_csv(rc, report);
  man.outputs.push_back(rc.string());
  const fs::path rj = out / "rates.json";
  write_rates_json(rj, report, man.method);
  man.outputs.push_back(rj.string());
  man.timings_sec.emplace_back("evaluate", seconds_since(t0));
  finish_manifest(out, man, o);
  return 0;
}

int cmd_experiment123(int which, const CommonOpts& o) {
  ExperimentConfig cfg = which == 1   ? study_spherical_config()
                         : which == 2 ? study_fullcov_config()
                                      : study_refinement_config();
  if (!o.config_path.empty()) cfg = load_config_file(o.config_path);
  apply_overrides(cfg, o);
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const auto t0 = Clock::now();
  const ExperimentResult res =
      which == 3 ? run_refinement_comparison(cfg) : run_vq_comparison(cfg);
  RunManifest man;
  man.config_hash = config_hash(cfg);
  man.seed = cfg.seed;
  man.method = "experiment" + std::to_string(which);
  write_runs(out, res, man);
  man.timings_sec.emplace_back("total", seconds_since(t0));
  for (const ImprovementRow& r : res.improvements) say(o, improvement_line(r));
  finish_manifest(out, man, o);
  return 0;
}

int cmd_experiment4(const CommonOpts& o) {
  MismatchStudyConfig mc = study_mismatch_config();
  if (!o.config_path.empty())
    throw std::runtime_error("experiment4 uses built-in densities; --config is not supported");
  apply_overrides(mc.matched_a, o);
  apply_overrides(mc.matched_b, o);
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const auto t0 = Clock::now();
  const ExperimentResult res = run_mismatch_study(mc);
  RunManifest man;
  man.config_hash =
      hex64(fnv1a64(config_to_json(mc.matched_a) + config_to_json(mc.matched_b)));
  man.seed = mc.matched_a.seed;
  man.method = "experiment4";
  write_runs(out, res, man);
  man.timings_sec.emplace_back("total", seconds_since(t0));
  for (const ImprovementRow& r : res.improvements) say(o, improvement_line(r));
  finish_manifest(out, man, o);
  return 0;
}

int cmd_oned(const CommonOpts& o) {
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const auto t0 = Clock::now();
  const std::uint64_t seed = o.seed.value_or(1);
  const std::vector<std::string> files = run_line_study(out, seed);
  RunManifest man;
  man.config_hash = hex64(fnv1a64("line-study"));
  man.seed = seed;
  man.method = "oned";
  man.outputs = files;
  man.timings_sec.emplace_back("total", seconds_since(t0));
  finish_manifest(out, man, o);
  return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& base_path,
                const std::string& cand_path) {
  const RateReport base = read_rates_json(base_path);
  const RateReport cand = read_rates_json(cand_path);
  if (base.per_power.size() != cand.per_power.size())
    throw std::runtime_error("compare: reports cover different power grids");
  std::string base_label = fs::path(base_path).stem().string();
  std::string cand_label = fs::path(cand_path).stem().string();
  if (base_label == cand_label) {
    base_label += "_base";
    cand_label += "_new";
  }
  std::vector<ImprovementRow> rows;
  for (std::size_t i = 0; i < base.per_power.size(); ++i) {
    const PowerMetrics& bm = base.per_power[i];
    const PowerMetrics& nm = cand.per_power[i];
    if (std::abs(bm.rho_db - nm.rho_db) > 1e-9)
      throw std::runtime_error("compare: reports cover different power grids");
    rows.push_back({base_label, cand_label, "sum_rate", bm.rho_db, bm.sum_rate,
                    nm.sum_rate, improvement_ratio(bm.sum_rate, nm.sum_rate)});
    rows.push_back({base_label, cand_label, "likely95", bm.rho_db, bm.likely95,
                    nm.likely95, improvement_ratio(bm.likely95, nm.likely95)});
  }
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const fs::path ic = out / "improvements.csv";
  write_improvements_csv(ic, rows);
  for (const ImprovementRow& r : rows) say(o, improvement_line(r));
  say(o, "wrote " + ic.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cell-free AP placement and rate-evaluation toolkit"};
  app.require_subcommand(1);

  CommonOpts place_o, eval_o, e1_o, e2_o, e3_o, e4_o, oned_o, cmp_o;
  std::string placement_path, cmp_base, cmp_cand;

  CLI::App* place = app.add_subcommand("place", "train an AP placement from a config");
  add_config_flag(place, place_o, true);
  add_override_flags(place, place_o, true);
  add_output_flags(place, place_o);

  CLI::App* eval =
      app.add_subcommand("evaluate", "Monte Carlo rate evaluation of a stored placement");
  add_config_flag(eval, eval_o, true);
  eval->add_option("--placement", placement_path, "placement JSON to evaluate")
      ->required()
      ->check(CLI::ExistingFile);
  add_override_flags(eval, eval_o, true);
  add_output_flags(eval, eval_o);

  CLI::App* e1 = app.add_subcommand(
      "experiment1", "base methods on the three-cluster spherical density");
  add_config_flag(e1, e1_o, false);
  add_override_flags(e1, e1_o, false);
  add_output_flags(e1, e1_o);

  CLI::App* e2 = app.add_subcommand(
      "experiment2", "base methods with a full-covariance cluster");
  add_config_flag(e2, e2_o, false);
  add_override_flags(e2, e2_o, false);
  add_output_flags(e2, e2_o);

  CLI::App* e3 = app.add_subcommand(
      "experiment3", "gradient-refined methods on the full-covariance density");
  add_config_flag(e3, e3_o, false);
  add_override_flags(e3, e3_o, false);
  add_output_flags(e3, e3_o);

  CLI::App* e4 = app.add_subcommand(
      "experiment4", "density-mismatch study (matched vs re-spread users)");
  add_override_flags(e4, e4_o, false);
  add_output_flags(e4, e4_o);

  CLI::App* oned = app.add_subcommand("oned", "one-dimensional illustrative study");
  oned->add_option("--seed", oned_o.seed, "sampling seed");
  add_output_flags(oned, oned_o);

  CLI::App* cmp =
      app.add_subcommand("compare", "improvement ratios between two rate reports");
  cmp->add_option("baseline", cmp_base, "baseline rates.json")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("candidate", cmp_cand, "candidate rates.json")
      ->required()
      ->check(CLI::ExistingFile);
  add_output_flags(cmp, cmp_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (place->parsed()) return cmd_place(place_o);
    if (eval->parsed()) return cmd_evaluate(eval_o, placement_path);
    if (e1->parsed()) return cmd_experiment123(1, e1_o);
    if (e2->parsed()) return cmd_experiment123(2, e2_o);
    if (e3->parsed()) return cmd_experiment123(3, e3_o);
    if (e4->parsed()) return cmd_experiment4(e4_o);
    if (oned->parsed()) return cmd_oned(oned_o);
    if (cmp->parsed()) return cmd_compare(cmp_o, cmp_base, cmp_cand);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
