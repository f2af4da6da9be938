#pragma once

#include <cstdint>
#include <vector>

#include "cfplace/channel.hpp"
#include "cfplace/geometry.hpp"
#include "cfplace/scenario.hpp"

namespace cfplace {

struct PowerMetrics {
  double rho_db = 0.0;
  double sum_rate = 0.0;   // mean over trials of the K-user rate sum, bits/s/Hz
  double likely95 = 0.0;   // 5th percentile of the pooled per-user samples
  double stderr_sum = 0.0;
  double stderr_95 = 0.0;
  std::vector<double> rate_samples;  // pooled per-user rates, trial order
};

struct RateReport {
  std::vector<PowerMetrics> per_power;
  int mc_iterations = 0;
  int num_users = 0;
  std::uint64_t seed = 0;
  TailConvention convention = TailConvention::kPooled;
  int fading_draws_per_trial = 1;

  const PowerMetrics& at_power(double rho_db) const;
};

// Linear-interpolation percentile (index h = q*(n-1) between order
// statistics). q in [0, 1]; samples need not be sorted.
double rate_percentile(std::vector<double> samples, double q);

// 100 * (new - base) / base; throws std::domain_error when base <= 0.
double improvement_ratio(double base_value, double new_value);

// Monte Carlo ZF evaluation: each trial draws K fresh users and a fresh
// fading realization (shared across the power grid; ZF SNR scales linearly in
// rho_r). Singular Gram draws are redrawn up to 3 times, then propagate. The
// placement is canonicalized (sorted) first so AP order cannot affect the
// stream pairing; ZF itself is permutation-invariant.
RateReport evaluate_placement(const Placement& aps, const UserDensity& density,
                              const ChannelParams& params, int num_users,
                              const std::vector<double>& power_grid_db,
                              int mc_iterations, std::uint64_t seed,
                              TailConvention convention = TailConvention::kPooled,
                              int fading_draws_per_trial = 1);

}  // namespace cfplace
