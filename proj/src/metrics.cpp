#include "cfplace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfplace {

const PowerMetrics& RateReport::at_power(double rho_db) const {
  for (const PowerMetrics& pm : per_power)
    if (pm.rho_db == rho_db) return pm;
  throw std::out_of_range("RateReport::at_power: power not in grid");
}

double rate_percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("rate_percentile: no samples");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("rate_percentile: q outside [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = q * static_cast<double>(samples.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= samples.size()) return samples.back();
  const double frac = h - static_cast<double>(lo);
  return samples[lo] + frac * (samples[lo + 1] - samples[lo]);
}

double improvement_ratio(double base_value, double new_value) {
  if (!(base_value > 0.0))
    throw std::domain_error("improvement_ratio: base value must be positive");
  return 100.0 * (new_value - base_value) / base_value;
}

namespace {

// Order-statistic spread around the q-quantile rank (z = 1) as a quantile
// standard-error estimate; crude but distribution-free.
double quantile_stderr(const std::vector<double>& sorted, double q) {
  const double n = static_cast<double>(sorted.size());
  if (sorted.size() < 3) return 0.0;
  const double r = q * (n - 1);
  const double half = std::sqrt(n * q * (1.0 - q));
  const auto clamp_idx = [&](double v) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, n - 1));
  };
  const std::size_t lo = clamp_idx(std::floor(r - half));
  const std::size_t hi = clamp_idx(std::ceil(r + half));
  return 0.5 * (sorted[hi] - sorted[lo]);
}

constexpr double kLog2E = 1.4426950408889634073599246810019;

}  // namespace

RateReport evaluate_placement(const Placement& aps, const UserDensity& density,
                              const ChannelParams& params, int num_users,
                              const std::vector<double>& power_grid_db,
                              int mc_iterations, std::uint64_t seed,
                              TailConvention convention,
                              int fading_draws_per_trial) {
  if (aps.empty()) throw std::invalid_argument("evaluate_placement: empty placement");
  if (num_users < 1) throw std::invalid_argument("evaluate_placement: num_users < 1");
  if (static_cast<int>(aps.size()) < num_users)
    throw std::invalid_argument("evaluate_placement: ZF needs at least K APs");
  if (mc_iterations < 1)
    throw std::invalid_argument("evaluate_placement: mc_iterations < 1");
  if (power_grid_db.empty())
    throw std::invalid_argument("evaluate_placement: empty power grid");

  const int draws = convention == TailConvention::kPerUserExpected
                        ? std::max(1, fading_draws_per_trial)
                        : 1;

  // Canonical AP order: placements equal up to permutation evaluate
  // identically, byte for byte.
  Placement sorted_aps = aps;
  std::sort(sorted_aps.begin(), sorted_aps.end(), lex_less);

  RateReport report;
  report.mc_iterations = mc_iterations;
  report.num_users = num_users;
  report.seed = seed;
  report.convention = convention;
  report.fading_draws_per_trial = draws;

  const std::size_t n_powers = power_grid_db.size();
  std::vector<double> rho_lin(n_powers);
  for (std::size_t p = 0; p < n_powers; ++p)
    rho_lin[p] = std::pow(10.0, power_grid_db[p] / 10.0);

  std::vector<std::vector<double>> samples(n_powers);
  std::vector<std::vector<double>> trial_sums(n_powers);
  for (std::size_t p = 0; p < n_powers; ++p) {
    samples[p].reserve(static_cast<std::size_t>(mc_iterations) * num_users);
    trial_sums[p].reserve(mc_iterations);
  }

  const std::uint64_t eval_seed = derive_seed(seed, seed_salt::kEvaluation);
  for (int t = 0; t < mc_iterations; ++t) {
    Rng rng(derive_seed(eval_seed, seed_salt::kTrialBase + t));
    const std::vector<Point2> users = density.sample(num_users, rng);
    // Accumulate log2(1 + rho/diag) per power; the Gram inverse is computed
    // once per fading draw and reused across the grid.
    std::vector<std::vector<double>> rates(n_powers,
                                           std::vector<double>(num_users, 0.0));
    for (int d = 0; d < draws; ++d) {
      std::vector<double> inv_diag;
      int attempts = 0;
      for (;;) {
        try {
          const ChannelMatrix ch = draw_channel(sorted_aps, users, params, rng);
          inv_diag = zf_inverse_diagonal(ch);
          break;
        } catch (const std::runtime_error&) {
          if (++attempts > 3) throw;
        }
      }
      for (std::size_t p = 0; p < n_powers; ++p)
        for (int k = 0; k < num_users; ++k)
          rates[p][k] += kLog2E * std::log1p(rho_lin[p] / inv_diag[k]) / draws;
    }
    for (std::size_t p = 0; p < n_powers; ++p) {
      double sum = 0.0;
      for (int k = 0; k < num_users; ++k) {
        samples[p].push_back(rates[p][k]);
        sum += rates[p][k];
      }
      trial_sums[p].push_back(sum);
    }
  }

  for (std::size_t p = 0; p < n_powers; ++p) {
    PowerMetrics pm;
    pm.rho_db = power_grid_db[p];
    double mean = 0.0;
    for (double s : trial_sums[p]) mean += s;
    mean /= static_cast<double>(mc_iterations);
    pm.sum_rate = mean;
    double var = 0.0;
    for (double s : trial_sums[p]) var += (s - mean) * (s - mean);
    pm.stderr_sum = mc_iterations > 1
                        ? std::sqrt(var / (static_cast<double>(mc_iterations) - 1.0) /
                                    static_cast<double>(mc_iterations))
                        : 0.0;
    std::vector<double> sorted = samples[p];
    std::sort(sorted.begin(), sorted.end());
    const double h = 0.05 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    pm.likely95 = lo + 1 >= sorted.size()
                      ? sorted.back()
                      : sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
    pm.stderr_95 = quantile_stderr(sorted, 0.05);
    pm.rate_samples = std::move(samples[p]);
    report.per_power.push_back(std::move(pm));
  }
  return report;
}

}  // namespace cfplace
