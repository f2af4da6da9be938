#include <cfplace/experiments.hpp>

#include <cmath>
#include <stdexcept>
#include <utility>

#include <cfplace/gradient.hpp>
#include <cfplace/pdfvq.hpp>
#include <cfplace/rng.hpp>
#include <cfplace/tsvq.hpp>
#include <cfplace/vq.hpp>

namespace cfplace {
namespace {

constexpr double kRefDistanceM = 30.0;

ExperimentConfig base_study_config() {
  ExperimentConfig cfg;
  cfg.region = Region{-1000.0, 1000.0, -1000.0, 1000.0};
  cfg.gmm = {
      {0.6, {500.0, -500.0}, {1e4, 0.0, 1e4}},
      {0.2, {0.0, 500.0}, {1e4, 0.0, 1e4}},
      {0.2, {-500.0, 0.0}, {1e4, 0.0, 1e4}},
  };
  cfg.num_aps = 32;
  cfg.num_users_placement = 2000;
  cfg.num_users_eval = 4;
  cfg.power_grid_db = {5, 10, 15, 20, 25, 30};
  cfg.seed = 1;
  cfg.method = Method::kLloyd;
  cfg.restarts = 10;
  cfg.channel.gamma = 3.5;
  cfg.channel.epsilon = 1.0;
  cfg.channel.shadowing_sigma_db = 0.0;
  cfg.channel.constant_c = std::pow(kRefDistanceM, cfg.channel.gamma);
  return cfg;
}

void append_improvements(ExperimentResult& result, const std::string& baseline_label,
                         double top_db) {
  const MethodRun* base = nullptr;
  for (const MethodRun& run : result.runs)
    if (run.label == baseline_label) base = &run;
  if (base == nullptr) throw std::logic_error("improvements: baseline run missing");
  const PowerMetrics& b = base->report.at_power(top_db);
  for (const MethodRun& run : result.runs) {
    if (&run == base) continue;
    const PowerMetrics& n = run.report.at_power(top_db);
    result.improvements.push_back({baseline_label, run.label, "sum_rate", top_db,
                                   b.sum_rate, n.sum_rate,
                                   improvement_ratio(b.sum_rate, n.sum_rate)});
    result.improvements.push_back({baseline_label, run.label, "likely95", top_db,
                                   b.likely95, n.likely95,
                                   improvement_ratio(b.likely95, n.likely95)});
  }
}

MethodRun evaluate_method(const ExperimentConfig& cfg, const UserDensity& density,
                          Method method) {
  MethodRun run;
  run.label = method_name(method);
  run.method = method;
  run.placement = make_placement(cfg, method);
  run.report = evaluate_placement(run.placement, density, cfg.channel, cfg.num_users_eval,
                                  cfg.power_grid_db, cfg.mc_iterations, cfg.seed,
                                  cfg.convention, cfg.fading_draws);
  return run;
}

}  // namespace

ExperimentConfig study_spherical_config() { return base_study_config(); }

ExperimentConfig study_fullcov_config() {
  ExperimentConfig cfg = base_study_config();
  // second cluster stretched with correlated coordinates
  cfg.gmm[1].cov = Sym2{1e4, 2e4 / 3.0, 2e4};
  return cfg;
}

ExperimentConfig study_refinement_config() { return study_fullcov_config(); }

MismatchStudyConfig study_mismatch_config() {
  MismatchStudyConfig mc;
  ExperimentConfig cfg = base_study_config();
  cfg.num_aps = 18;
  cfg.method = Method::kPdfvq;
  cfg.gmm = {{1.0, {0.0, 0.0}, Sym2{4e4, 4e4 / 3.0, 2e4}}};
  mc.matched_a = cfg;
  // Same cluster rotated a quarter turn: congruent shape, different spread
  // direction. Congruence keeps the two matched baselines statistically
  // comparable, so the cross-evaluation isolates the orientation mismatch.
  cfg.gmm = {{1.0, {0.0, 0.0}, Sym2{2e4, -4e4 / 3.0, 4e4}}};
  mc.matched_b = cfg;
  return mc;
}

Placement make_placement(const ExperimentConfig& config) {
  return make_placement(config, config.method);
}

Placement make_placement(const ExperimentConfig& config, Method method) {
  ExperimentConfig cfg = config;
  cfg.method = method;
  cfg.validate();
  const UserDensity density = cfg.density();
  const std::vector<Point2> train =
      density.sample(static_cast<std::size_t>(cfg.num_users_placement),
                     derive_seed(cfg.seed, seed_salt::kTraining));

  Placement placement;
  switch (base_method(cfg.method)) {
    case Method::kLloyd: {
      LloydConfig lc;
      lc.restarts = cfg.restarts;
      placement = lloyd_run(train, cfg.num_aps, cfg.seed, lc).placement;
      break;
    }
    case Method::kTsvq:
      placement = tsvq_run(train, cfg.num_aps).placement;
      break;
    case Method::kPdfvq:
      placement = pdfvq_place(cfg).placement;
      break;
    default:
      throw std::logic_error("make_placement: unexpected base method");
  }

  if (method_uses_maxsum(cfg.method) || method_uses_maxmin(cfg.method)) {
    AscentConfig ac;
    ac.max_iters = cfg.ascent_max_iters;
    ac.stall_window = cfg.ascent_stall_window;
    ac.rho_r = std::pow(10.0, cfg.top_power_db() / 10.0);
    if (method_uses_maxsum(cfg.method)) {
      ac.delta = cfg.maxsum_delta;
      ac.tail_fraction = 1.0;
    } else {
      ac.delta = cfg.maxmin_delta;
      ac.tail_fraction = cfg.tail_fraction;
    }
    placement = ascend(placement, train, cfg.channel, ac).placement;
  }
  return placement;
}

ExperimentResult run_vq_comparison(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.validate();
  const UserDensity density = cfg.density();
  ExperimentResult result;
  for (Method m : {Method::kLloyd, Method::kTsvq, Method::kPdfvq})
    result.runs.push_back(evaluate_method(cfg, density, m));
  append_improvements(result, "lloyd", cfg.top_power_db());
  return result;
}

ExperimentResult run_refinement_comparison(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.validate();
  const UserDensity density = cfg.density();
  ExperimentResult result;
  for (Method m : {Method::kLloyd, Method::kTsvq, Method::kPdfvq, Method::kLloydMaxSum,
                   Method::kTsvqMaxSum, Method::kPdfvqMaxSum, Method::kLloydMaxMin,
                   Method::kTsvqMaxMin, Method::kPdfvqMaxMin})
    result.runs.push_back(evaluate_method(cfg, density, m));
  append_improvements(result, "lloyd", cfg.top_power_db());
  return result;
}

ExperimentResult run_mismatch_study(const MismatchStudyConfig& config) {
  ExperimentConfig a = config.matched_a;
  ExperimentConfig b = config.matched_b;
  a.validate();
  b.validate();
  const UserDensity density_a = a.density();
  const UserDensity density_b = b.density();
  const Placement place_a = make_placement(a);
  const Placement place_b = make_placement(b);

  ExperimentResult result;
  MethodRun aa;
  aa.label = "pdfvq_a_on_a";
  aa.method = a.method;
  aa.placement = place_a;
  aa.report = evaluate_placement(place_a, density_a, a.channel, a.num_users_eval,
                                 a.power_grid_db, a.mc_iterations, a.seed,
                                 a.convention, a.fading_draws);
  MethodRun ab;
  ab.label = "pdfvq_a_on_b";
  ab.method = a.method;
  ab.placement = place_a;
  ab.report = evaluate_placement(place_a, density_b, b.channel, b.num_users_eval,
                                 b.power_grid_db, b.mc_iterations, b.seed,
                                 b.convention, b.fading_draws);
  MethodRun bb;
  bb.label = "pdfvq_b_on_b";
  bb.method = b.method;
  bb.placement = place_b;
  bb.report = evaluate_placement(place_b, density_b, b.channel, b.num_users_eval,
                                 b.power_grid_db, b.mc_iterations, b.seed,
                                 b.convention, b.fading_draws);
  result.runs.push_back(std::move(aa));
  result.runs.push_back(std::move(ab));
  result.runs.push_back(std::move(bb));

  const double top = b.top_power_db();
  const PowerMetrics& mm_bb = result.runs[2].report.at_power(top);
  const PowerMetrics& mm_ab = result.runs[1].report.at_power(top);
  const PowerMetrics& mm_aa = result.runs[0].report.at_power(top);
  result.improvements.push_back({"pdfvq_b_on_b", "pdfvq_a_on_b", "sum_rate", top,
                                 mm_bb.sum_rate, mm_ab.sum_rate,
                                 improvement_ratio(mm_bb.sum_rate, mm_ab.sum_rate)});
  result.improvements.push_back({"pdfvq_b_on_b", "pdfvq_a_on_b", "likely95", top,
                                 mm_bb.likely95, mm_ab.likely95,
                                 improvement_ratio(mm_bb.likely95, mm_ab.likely95)});
  result.improvements.push_back({"pdfvq_a_on_a", "pdfvq_a_on_b", "sum_rate", top,
                                 mm_aa.sum_rate, mm_ab.sum_rate,
                                 improvement_ratio(mm_aa.sum_rate, mm_ab.sum_rate)});
  result.improvements.push_back({"pdfvq_a_on_a", "pdfvq_a_on_b", "likely95", top,
                                 mm_aa.likely95, mm_ab.likely95,
                                 improvement_ratio(mm_aa.likely95, mm_ab.likely95)});
  return result;
}

}  // namespace cfplace
