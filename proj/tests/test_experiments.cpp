#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <cfplace/experiments.hpp>
#include <cfplace/metrics.hpp>
#include <cfplace/scenario.hpp>

using namespace cfplace;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg = study_spherical_config();
  cfg.num_aps = 8;
  cfg.num_users_placement = 400;
  cfg.num_users_eval = 2;
  cfg.power_grid_db = {10, 20};
  cfg.mc_iterations = 40;
  cfg.restarts = 2;
  cfg.fading_draws = 2;
  cfg.ascent_max_iters = 60;
  cfg.ascent_stall_window = 15;
  return cfg;
}

bool same_placement(const Placement& a, const Placement& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
  return true;
}

}  // namespace

TEST_CASE("built-in study configurations are valid and pinned") {
  const ExperimentConfig sph = study_spherical_config();
  sph.validate();
  REQUIRE(sph.gmm.size() == 3);
  CHECK(sph.gmm[0].weight == doctest::Approx(0.6));
  CHECK(sph.num_aps == 32);
  CHECK(sph.num_users_eval == 4);
  CHECK(sph.channel.constant_c == doctest::Approx(std::pow(30.0, 3.5)));
  CHECK(sph.channel.shadowing_sigma_db == 0.0);
  CHECK(sph.top_power_db() == doctest::Approx(30.0));
  CHECK(sph.convention == TailConvention::kPerUserExpected);

  const ExperimentConfig full = study_fullcov_config();
  full.validate();
  CHECK(full.gmm[1].cov.b == doctest::Approx(2e4 / 3.0));
  CHECK(full.gmm[0].cov.b == doctest::Approx(0.0));

  const ExperimentConfig refine = study_refinement_config();
  refine.validate();
  CHECK(refine.gmm[1].cov.c == doctest::Approx(full.gmm[1].cov.c));

  const MismatchStudyConfig mm = study_mismatch_config();
  mm.matched_a.validate();
  mm.matched_b.validate();
  CHECK(mm.matched_a.num_aps == 18);
  CHECK(mm.matched_a.method == Method::kPdfvq);
  CHECK(mm.matched_a.gmm.size() == 1);
  CHECK(mm.matched_a.gmm[0].cov.a == doctest::Approx(4e4));
  // Density B is the quarter-turn rotation of A: covariance axes swap and the
  // off-diagonal flips sign, so the two clusters are congruent.
  CHECK(mm.matched_b.gmm[0].cov.a == doctest::Approx(mm.matched_a.gmm[0].cov.c));
  CHECK(mm.matched_b.gmm[0].cov.c == doctest::Approx(mm.matched_a.gmm[0].cov.a));
  CHECK(mm.matched_b.gmm[0].cov.b == doctest::Approx(-mm.matched_a.gmm[0].cov.b));
}

TEST_CASE("placements are reproducible and sized to the AP budget") {
  const ExperimentConfig cfg = tiny_config();
  for (Method m : {Method::kLloyd, Method::kTsvq, Method::kPdfvq}) {
    const Placement a = make_placement(cfg, m);
    const Placement b = make_placement(cfg, m);
    CHECK(a.size() == 8);
    CHECK(same_placement(a, b));
  }

  // Setting the method on the config is the same as passing it explicitly.
  ExperimentConfig with_method = cfg;
  with_method.method = Method::kTsvq;
  CHECK(same_placement(make_placement(with_method),
                       make_placement(cfg, Method::kTsvq)));
}

TEST_CASE("gradient refinement moves the base placement") {
  const ExperimentConfig cfg = tiny_config();
  const Placement base = make_placement(cfg, Method::kLloyd);
  const Placement lifted = make_placement(cfg, Method::kLloydMaxSum);
  CHECK(lifted.size() == base.size());
  CHECK_FALSE(same_placement(base, lifted));
}

TEST_CASE("vq comparison: labels, rows, and hand-recomputed percentages") {
  const ExperimentConfig cfg = tiny_config();
  const ExperimentResult res = run_vq_comparison(cfg);
  REQUIRE(res.runs.size() == 3);
  CHECK(res.runs[0].label == "lloyd");
  CHECK(res.runs[1].label == "tsvq");
  CHECK(res.runs[2].label == "pdfvq");
  for (const MethodRun& run : res.runs) {
    CHECK(run.placement.size() == 8);
    CHECK(run.report.per_power.size() == 2);
    CHECK(run.report.convention == cfg.convention);
    CHECK(run.report.fading_draws_per_trial == cfg.fading_draws);
  }

  REQUIRE(res.improvements.size() == 4);  // two candidates x two metrics
  const PowerMetrics& base = res.runs[0].report.at_power(20);
  for (const ImprovementRow& row : res.improvements) {
    CHECK(row.baseline == "lloyd");
    CHECK(row.rho_db == doctest::Approx(20.0));
    const MethodRun* cand = nullptr;
    for (const MethodRun& run : res.runs)
      if (run.label == row.candidate) cand = &run;
    REQUIRE(cand != nullptr);
    const PowerMetrics& n = cand->report.at_power(20);
    const double base_v = row.metric == "sum_rate" ? base.sum_rate : base.likely95;
    const double new_v = row.metric == "sum_rate" ? n.sum_rate : n.likely95;
    CHECK(row.base_value == doctest::Approx(base_v).epsilon(1e-12));
    CHECK(row.new_value == doctest::Approx(new_v).epsilon(1e-12));
    CHECK(row.improvement_pct ==
          doctest::Approx(improvement_ratio(base_v, new_v)).epsilon(1e-12));
  }
}

TEST_CASE("refinement comparison covers all nine variants") {
  ExperimentConfig cfg = tiny_config();
  cfg.mc_iterations = 20;  // keep the nine evaluations quick
  const ExperimentResult res = run_refinement_comparison(cfg);
  REQUIRE(res.runs.size() == 9);
  const std::vector<std::string> want = {
      "lloyd",        "tsvq",        "pdfvq",
      "lloyd+maxsum", "tsvq+maxsum", "pdfvq+maxsum",
      "lloyd+maxmin", "tsvq+maxmin", "pdfvq+maxmin"};
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(res.runs[i].label == want[i]);
  CHECK(res.improvements.size() == 16);  // eight candidates x two metrics
  for (const ImprovementRow& row : res.improvements) CHECK(row.baseline == "lloyd");
}

TEST_CASE("mismatch study: cross-density evaluation of one frozen placement") {
  MismatchStudyConfig mm = study_mismatch_config();
  for (ExperimentConfig* cfg : {&mm.matched_a, &mm.matched_b}) {
    cfg->num_aps = 8;
    cfg->num_users_placement = 400;
    cfg->num_users_eval = 2;
    cfg->power_grid_db = {10, 20};
    cfg->mc_iterations = 60;
    cfg->restarts = 2;
    cfg->fading_draws = 2;
  }
  const ExperimentResult res = run_mismatch_study(mm);
  REQUIRE(res.runs.size() == 3);
  CHECK(res.runs[0].label == "pdfvq_a_on_a");
  CHECK(res.runs[1].label == "pdfvq_a_on_b");
  CHECK(res.runs[2].label == "pdfvq_b_on_b");
  // The first two runs evaluate the identical A-matched placement.
  CHECK(same_placement(res.runs[0].placement, res.runs[1].placement));
  CHECK_FALSE(same_placement(res.runs[0].placement, res.runs[2].placement));

  REQUIRE(res.improvements.size() == 4);
  CHECK(res.improvements[0].baseline == "pdfvq_b_on_b");
  CHECK(res.improvements[2].baseline == "pdfvq_a_on_a");
  for (const ImprovementRow& row : res.improvements)
    CHECK(row.candidate == "pdfvq_a_on_b");
  // Evaluating the A-matched layout on the wrong density loses sum rate
  // against its own-density baseline.
  CHECK(res.improvements[2].improvement_pct < 0.0);
}

TEST_CASE("evaluation convention flows through to the reports") {
  ExperimentConfig cfg = tiny_config();
  cfg.convention = TailConvention::kPooled;
  const ExperimentResult pooled = run_vq_comparison(cfg);
  for (const MethodRun& run : pooled.runs) {
    CHECK(run.report.convention == TailConvention::kPooled);
    CHECK(run.report.fading_draws_per_trial == 1);
  }
}
