#pragma once

#include <string>
#include <vector>

#include "cfplace/config_io.hpp"
#include "cfplace/geometry.hpp"
#include "cfplace/metrics.hpp"
#include "cfplace/scenario.hpp"

namespace cfplace {

// Built-in study configurations (desk-scale; all knobs overridable via JSON
// configs with the same fields).
//
// Pathloss constant: beta = (d0 / d)^gamma with reference distance d0 = 30 m,
// i.e. constant_c = 30^3.5. Unit c would put every ZF SNR deep into the
// linear regime at the studied powers and wash out the placement effects the
// studies measure.
ExperimentConfig study_spherical_config();   // three spherical clusters, M=32
ExperimentConfig study_fullcov_config();     // second cluster full-covariance
ExperimentConfig study_refinement_config();  // full-cov density + ascent knobs

struct MismatchStudyConfig {
  ExperimentConfig matched_a;  // single elongated cluster, M=18
  ExperimentConfig matched_b;  // same users re-spread along another direction
};
MismatchStudyConfig study_mismatch_config();

// Placement via the configured method: base codebook (lloyd / tsvq / pdfvq)
// plus optional gradient refinement. Training set, restart streams, and the
// ascent all derive from config.seed.
Placement make_placement(const ExperimentConfig& config);
Placement make_placement(const ExperimentConfig& config, Method method);

struct MethodRun {
  std::string label;
  Method method = Method::kLloyd;
  Placement placement;
  RateReport report;
};

struct ExperimentResult {
  std::vector<MethodRun> runs;
  std::vector<ImprovementRow> improvements;  // at the top grid power
};

// Base methods (lloyd, tsvq, pdfvq) on one density; improvements vs lloyd.
ExperimentResult run_vq_comparison(const ExperimentConfig& config);

// All nine method variants (base + maxsum + maxmin); improvements vs lloyd.
ExperimentResult run_refinement_comparison(const ExperimentConfig& config);

// Density-A-matched placement evaluated on A and on B, against B-matched on
// B; improvement rows quantify the mismatch loss.
ExperimentResult run_mismatch_study(const MismatchStudyConfig& config);

}  // namespace cfplace
