#pragma once

#include <cstddef>
#include <vector>

#include "cfplace/channel.hpp"
#include "cfplace/geometry.hpp"

namespace cfplace {

// Gradient ascent on AP positions against the asymptotic-SNR rate objective
//   F(q) = mean_k ln(1 + rho_r * sum_m beta_mk),
// the max-min variant restricting the mean to the worst ceil(f*K) users,
// re-selected every iteration. Natural log internally; reported rates use
// log2 elsewhere, which only rescales the gradient.

struct AscentConfig {
  double delta = 1e3;          // fixed step size
  int max_iters = 500;
  double tail_fraction = 1.0;  // 1 = plain sum objective
  double rho_r = 1e3;          // linear transmit SNR
  double stall_rel_change = 1e-8;
  int stall_window = 20;
  double divergence_drop = 0.5;  // fraction of running max treated as a blow-up
  int max_halvings = 5;
};

// Worst ceil(fraction*K) users by rate under the current placement; returned
// ascending by user index so downstream sums are order-stable.
std::vector<std::size_t> tail_set(const Placement& aps,
                                  const std::vector<Point2>& users,
                                  const ChannelParams& params, double rho_r,
                                  double fraction);

double placement_objective(const Placement& aps, const std::vector<Point2>& users,
                           const ChannelParams& params, double rho_r,
                           double tail_fraction = 1.0);

// dF/dq_m for the subset objective; exact derivative of the regularized
// pathloss, so central finite differences of placement_objective match it.
Placement subset_rate_gradient(const Placement& aps,
                               const std::vector<Point2>& users,
                               const std::vector<std::size_t>& subset,
                               const ChannelParams& params, double rho_r);

Placement sum_rate_gradient(const Placement& aps, const std::vector<Point2>& users,
                            const ChannelParams& params, double rho_r);

Placement tail_rate_gradient(const Placement& aps, const std::vector<Point2>& users,
                             const ChannelParams& params, double rho_r,
                             double fraction);

struct AscentResult {
  Placement placement;        // best iterate seen
  double objective = 0.0;     // objective at that iterate
  std::vector<double> trace;  // best-so-far objective per iteration, nondecreasing
  int iterations = 0;
  int halvings = 0;
  double final_delta = 0.0;
};

// Fixed-step ascent with a stall stop (relative best-objective change below
// stall_rel_change across stall_window iterations) and a divergence guard: an
// objective drop past divergence_drop of the running max halves the step and
// resumes from the best iterate, at most max_halvings times.
AscentResult ascend(const Placement& init, const std::vector<Point2>& users,
                    const ChannelParams& params, const AscentConfig& config);

}  // namespace cfplace
