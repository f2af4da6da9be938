#include "cfplace/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfplace {

namespace {

std::size_t tail_count(std::size_t num_users, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("tail fraction outside (0, 1]");
  const auto n = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(num_users)));
  return std::max<std::size_t>(1, std::min(n, num_users));
}

}  // namespace

std::vector<std::size_t> tail_set(const Placement& aps,
                                  const std::vector<Point2>& users,
                                  const ChannelParams& params, double rho_r,
                                  double fraction) {
  const std::size_t keep = tail_count(users.size(), fraction);
  std::vector<std::pair<double, std::size_t>> psi(users.size());
  for (std::size_t k = 0; k < users.size(); ++k)
    psi[k] = {asymptotic_snr_single(users[k], aps, params, rho_r), k};
  std::partial_sort(psi.begin(), psi.begin() + keep, psi.end());
  std::vector<std::size_t> idx(keep);
  for (std::size_t i = 0; i < keep; ++i) idx[i] = psi[i].second;
  std::sort(idx.begin(), idx.end());
  return idx;
}

double placement_objective(const Placement& aps, const std::vector<Point2>& users,
                           const ChannelParams& params, double rho_r,
                           double tail_fraction) {
  if (users.empty()) throw std::invalid_argument("placement_objective: no users");
  std::vector<std::size_t> subset;
  if (tail_fraction >= 1.0) {
    subset.resize(users.size());
    for (std::size_t i = 0; i < subset.size(); ++i) subset[i] = i;
  } else {
    subset = tail_set(aps, users, params, rho_r, tail_fraction);
  }
  double sum = 0.0;
  for (std::size_t k : subset)
    sum += std::log1p(asymptotic_snr_single(users[k], aps, params, rho_r));
  return sum / static_cast<double>(subset.size());
}

Placement subset_rate_gradient(const Placement& aps,
                               const std::vector<Point2>& users,
                               const std::vector<std::size_t>& subset,
                               const ChannelParams& params, double rho_r) {
  if (subset.empty()) throw std::invalid_argument("subset_rate_gradient: empty subset");
  Placement grad(aps.size(), Point2{0.0, 0.0});
  const double inv_n = 1.0 / static_cast<double>(subset.size());
  for (std::size_t k : subset) {
    const Point2 p = users[k];
    const double psi = asymptotic_snr_single(p, aps, params, rho_r);
    const double w = inv_n * rho_r / (1.0 + psi);
    for (std::size_t m = 0; m < aps.size(); ++m) {
      const Point2 u = p - aps[m];
      const double d = norm(u);
      if (d == 0.0) continue;  // kernel limit is 0 for gamma > 1
      const double dg = std::pow(d, params.gamma);
      const double denom = dg + params.epsilon;
      // d(beta)/dq = c * gamma * d^{gamma-2} * u / (d^gamma + eps)^2
      const double scale =
          w * params.constant_c * params.gamma * dg / (d * d * denom * denom);
      grad[m] += scale * u;
    }
  }
  return grad;
}

Placement sum_rate_gradient(const Placement& aps, const std::vector<Point2>& users,
                            const ChannelParams& params, double rho_r) {
  std::vector<std::size_t> all(users.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return subset_rate_gradient(aps, users, all, params, rho_r);
}

Placement tail_rate_gradient(const Placement& aps, const std::vector<Point2>& users,
                             const ChannelParams& params, double rho_r,
                             double fraction) {
  return subset_rate_gradient(
      aps, users, tail_set(aps, users, params, rho_r, fraction), params, rho_r);
}

AscentResult ascend(const Placement& init, const std::vector<Point2>& users,
                    const ChannelParams& params, const AscentConfig& config) {
  AscentResult res;
  res.placement = init;
  res.objective =
      placement_objective(init, users, params, config.rho_r, config.tail_fraction);
  res.trace.push_back(res.objective);
  res.final_delta = config.delta;

  Placement x = init;
  double running_max = res.objective;
  double delta = config.delta;
  for (int it = 0; it < config.max_iters; ++it) {
    const Placement g =
        config.tail_fraction >= 1.0
            ? sum_rate_gradient(x, users, params, config.rho_r)
            : tail_rate_gradient(x, users, params, config.rho_r,
                                 config.tail_fraction);
    for (std::size_t m = 0; m < x.size(); ++m) x[m] += delta * g[m];
    const double obj =
        placement_objective(x, users, params, config.rho_r, config.tail_fraction);
    res.iterations = it + 1;
    if (obj > res.objective) {
      res.objective = obj;
      res.placement = x;
    }
    running_max = std::max(running_max, obj);
    if (obj < (1.0 - config.divergence_drop) * running_max) {
      if (res.halvings >= config.max_halvings) {
        res.trace.push_back(res.objective);
        break;
      }
      ++res.halvings;
      delta *= 0.5;
      x = res.placement;  // resume from the best iterate
    }
    res.trace.push_back(res.objective);
    if (static_cast<int>(res.trace.size()) > config.stall_window) {
      const double past = res.trace[res.trace.size() - 1 - config.stall_window];
      if (res.objective - past <=
          config.stall_rel_change * std::max(std::abs(past), 1e-300))
        break;
    }
  }
  res.final_delta = delta;
  return res;
}

}  // namespace cfplace
