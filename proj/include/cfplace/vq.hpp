#pragma once

#include <cstdint>
#include <vector>

#include "cfplace/geometry.hpp"
#include "cfplace/rng.hpp"
#include "cfplace/scenario.hpp"

namespace cfplace {

// Partition of training users under squared-error nearest-neighbor rule.
struct PartitionResult {
  std::vector<int> assignments;  // user index -> AP index
  std::vector<int> cell_sizes;
  double mse = 0.0;  // mean squared distance over all users
};

// Ties go to the lowest AP index, which makes the partition deterministic.
PartitionResult nearest_neighbor_partition(const std::vector<Point2>& users,
                                           const Placement& placement);

// Moves every AP to its cell's arithmetic mean. An empty cell is re-seeded at
// the training point with maximal current distortion (distinct points when
// several cells are empty at once); this strictly reduces the next pass's MSE.
Placement centroid_update(const std::vector<Point2>& users,
                          const PartitionResult& partition,
                          const Placement& placement);

enum class LloydInit { kKmeansPlusPlus, kRandomPoints };

struct LloydConfig {
  int max_iters = 50;
  double tol = 1e-6;  // relative MSE improvement threshold
  int restarts = 10;
  LloydInit init = LloydInit::kKmeansPlusPlus;
};

struct LloydResult {
  Placement placement;
  std::vector<int> assignments;
  double mse = 0.0;
  std::vector<double> mse_trace;  // one entry per NNC pass, nonincreasing
  int iterations = 0;
  bool converged = false;  // stopped on tol, not on the iteration cap
};

std::vector<Point2> kmeanspp_init(const std::vector<Point2>& users, int num_aps,
                                  Rng& rng);

// Single Lloyd descent from an explicit initial placement.
LloydResult lloyd_run_single(const std::vector<Point2>& users,
                             const Placement& init, const LloydConfig& config);

// Multi-restart Lloyd; keeps the lowest-MSE restart (first wins ties).
// Requires num_aps <= number of distinct training points.
LloydResult lloyd_run(const std::vector<Point2>& users, int num_aps,
                      std::uint64_t seed, const LloydConfig& config = {});

// High-resolution AP density g = sqrt(f) / integral of sqrt(f) over the
// region. The normalizer is computed once by composite Gauss-Legendre
// quadrature at construction.
class HighResApDensity {
 public:
  HighResApDensity(const UserDensity& density, int panels = 48, int order = 8);
  double value(Point2 p) const;
  double normalizer() const { return normalizer_; }

 private:
  const UserDensity& density_;
  double normalizer_;
};

}  // namespace cfplace
