#include "cfplace/vq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "cfplace/quadrature.hpp"

namespace cfplace {

PartitionResult nearest_neighbor_partition(const std::vector<Point2>& users,
                                           const Placement& placement) {
  if (placement.empty())
    throw std::invalid_argument("nearest_neighbor_partition: empty placement");
  PartitionResult out;
  out.assignments.resize(users.size());
  out.cell_sizes.assign(placement.size(), 0);
  double total = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    int best = 0;
    double best_d2 = dist2(users[i], placement[0]);
    for (std::size_t m = 1; m < placement.size(); ++m) {
      const double d2 = dist2(users[i], placement[m]);
      if (d2 < best_d2) {  // strict: ties keep the lowest index
        best_d2 = d2;
        best = static_cast<int>(m);
      }
    }
    out.assignments[i] = best;
    out.cell_sizes[best]++;
    total += best_d2;
  }
  out.mse = users.empty() ? 0.0 : total / static_cast<double>(users.size());
  return out;
}

Placement centroid_update(const std::vector<Point2>& users,
                          const PartitionResult& partition,
                          const Placement& placement) {
  const std::size_t m_aps = placement.size();
  std::vector<Point2> sums(m_aps, Point2{0.0, 0.0});
  for (std::size_t i = 0; i < users.size(); ++i)
    sums[partition.assignments[i]] += users[i];

  Placement updated(m_aps);
  std::vector<std::size_t> empty_cells;
  for (std::size_t m = 0; m < m_aps; ++m) {
    const int n = partition.cell_sizes[m];
    if (n > 0)
      updated[m] = (1.0 / n) * sums[m];
    else
      empty_cells.push_back(m);
  }
  if (!empty_cells.empty()) {
    // Rank training points by current distortion; hand each empty cell its
    // own point, worst first.
    std::vector<std::pair<double, std::size_t>> distortion(users.size());
    for (std::size_t i = 0; i < users.size(); ++i)
      distortion[i] = {dist2(users[i], placement[partition.assignments[i]]), i};
    std::sort(distortion.begin(), distortion.end(),
              [](const auto& a, const auto& b) {
                return a.first > b.first || (a.first == b.first && a.second < b.second);
              });
    for (std::size_t e = 0; e < empty_cells.size(); ++e) {
      const std::size_t pick = e < users.size() ? e : users.size() - 1;
      updated[empty_cells[e]] = users[distortion[pick].second];
    }
  }
  return updated;
}

std::vector<Point2> kmeanspp_init(const std::vector<Point2>& users, int num_aps,
                                  Rng& rng) {
  if (users.empty()) throw std::invalid_argument("kmeanspp_init: no users");
  const std::size_t n = users.size();
  Placement centers;
  centers.reserve(num_aps);
  centers.push_back(users[static_cast<std::size_t>(rng.uniform01() * n) % n]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(users[i], centers[0]);
  while (centers.size() < static_cast<std::size_t>(num_aps)) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick;
    if (total <= 0.0) {
      pick = static_cast<std::size_t>(rng.uniform01() * n) % n;
    } else {
      double r = rng.uniform01() * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        r -= d2[i];
        if (r <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(users[pick]);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], dist2(users[i], centers.back()));
  }
  return centers;
}

namespace {

Placement random_points_init(const std::vector<Point2>& users, int num_aps,
                             Rng& rng) {
  // Partial Fisher-Yates over indices; distinct indices, values may repeat.
  std::vector<std::size_t> idx(users.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Placement out;
  out.reserve(num_aps);
  for (int m = 0; m < num_aps; ++m) {
    const std::size_t j =
        m + static_cast<std::size_t>(rng.uniform01() * (idx.size() - m)) %
                (idx.size() - m);
    std::swap(idx[m], idx[j]);
    out.push_back(users[idx[m]]);
  }
  return out;
}

std::size_t count_distinct(const std::vector<Point2>& users) {
  std::set<std::pair<double, double>> seen;
  for (const Point2& p : users) seen.insert({p.x, p.y});
  return seen.size();
}

}  // namespace

LloydResult lloyd_run_single(const std::vector<Point2>& users,
                             const Placement& init, const LloydConfig& config) {
  if (init.empty()) throw std::invalid_argument("lloyd_run_single: empty init");
  if (users.empty()) throw std::invalid_argument("lloyd_run_single: no users");
  LloydResult res;
  res.placement = init;
  double prev = std::numeric_limits<double>::infinity();
  PartitionResult part;
  for (int it = 0; it < config.max_iters; ++it) {
    part = nearest_neighbor_partition(users, res.placement);
    res.mse_trace.push_back(part.mse);
    res.iterations = it + 1;
    if (std::isfinite(prev) && prev - part.mse <= config.tol * prev) {
      res.converged = true;
      break;
    }
    res.placement = centroid_update(users, part, res.placement);
    prev = part.mse;
  }
  if (!res.converged) {
    // Cap hit after a centroid step; resync assignments with the final
    // placement so the returned triple is coherent.
    part = nearest_neighbor_partition(users, res.placement);
    res.mse_trace.push_back(part.mse);
  }
  res.assignments = part.assignments;
  res.mse = part.mse;
  return res;
}

LloydResult lloyd_run(const std::vector<Point2>& users, int num_aps,
                      std::uint64_t seed, const LloydConfig& config) {
  if (num_aps < 1) throw std::invalid_argument("lloyd_run: num_aps must be >= 1");
  if (count_distinct(users) < static_cast<std::size_t>(num_aps))
    throw std::invalid_argument("lloyd_run: fewer distinct users than APs");
  LloydResult best;
  bool have = false;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(derive_seed(seed, seed_salt::kRestartBase + r));
    const Placement init = config.init == LloydInit::kKmeansPlusPlus
                               ? kmeanspp_init(users, num_aps, rng)
                               : random_points_init(users, num_aps, rng);
    LloydResult run = lloyd_run_single(users, init, config);
    if (!have || run.mse < best.mse) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

HighResApDensity::HighResApDensity(const UserDensity& density, int panels,
                                   int order)
    : density_(density) {
  auto sqrt_f = [&](Point2 p) { return std::sqrt(density_.pdf(p)); };
  normalizer_ = integrate2d_gl(sqrt_f, density_.region(), panels, order);
  if (!(normalizer_ > 0.0))
    throw std::runtime_error("HighResApDensity: vanishing normalizer");
}

double HighResApDensity::value(Point2 p) const {
  return std::sqrt(density_.pdf(p)) / normalizer_;
}

}  // namespace cfplace
