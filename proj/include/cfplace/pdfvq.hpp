#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cfplace/geometry.hpp"
#include "cfplace/linalg2.hpp"
#include "cfplace/scenario.hpp"

namespace cfplace {

// Density-matched quantizer design: split the AP budget across mixture
// clusters by weight and eigen-spectrum, then across the two principal
// dimensions of each cluster, and realize each dimension with an optimal
// scalar quantizer of the corresponding normal marginal.

struct ClusterSpectrum {
  double weight = 1.0;
  Point2 mean{0.0, 0.0};
  Eig2 eig;           // l1 >= l2, deterministic eigenvector signs
  double c_geo = 1.0; // sqrt(l1 * l2), geometric mean of the spectrum
};

std::vector<ClusterSpectrum> cluster_spectra(const std::vector<GmmComponent>& gmm);

struct ClusterAllocation {
  double bits = 0.0;   // b_l
  double count = 0.0;  // 2^{b_l}
};

// 2^{b_l} = M * sqrt(p_l c_l) / sum_j sqrt(p_j c_j); the counts sum to M
// exactly (analytic identity).
std::vector<ClusterAllocation> cluster_allocation(
    const std::vector<ClusterSpectrum>& spectra, int num_aps);

struct DimAllocation {
  std::array<double, 2> bits{0.0, 0.0};    // b_{l,j}
  std::array<double, 2> levels{1.0, 1.0};  // V_{l,j} = 2^{b_{l,j}}, continuous
};

// b_{l,j} = b_l / 2 + 0.5 log2(lambda_j / c_l); the level product equals
// 2^{b_l}. Levels below 1 are possible for eccentric clusters and are clamped
// later by the integer repair.
DimAllocation dimension_allocation(const ClusterAllocation& alloc, const Eig2& eig);

// Optimal scalar quantizer of N(0,1) with V levels: fixed point of the
// midpoint-threshold / conditional-mean iteration, iterated until the largest
// codepoint move is < 1e-10. Codepoints are strictly increasing and symmetric
// about 0.
std::vector<double> lloyd_max_unit(int levels);

// Memoizing table of standard-normal codebooks keyed by level count, with an
// optional JSON cache file ({"levels": {"<V>": [codepoints...]}}). Missing or
// stale entries are recomputed transparently.
class LloydMaxTable {
 public:
  const std::vector<double>& get(int levels);
  bool load(const std::string& path);  // false if unreadable; never throws
  void save(const std::string& path) const;

 private:
  std::map<int, std::vector<double>> table_;
};

// Codebook for N(0, lambda) is sqrt(lambda) times the unit codebook.
std::vector<double> scalar_codebook(int levels, double lambda, LloydMaxTable& table);

// Cartesian product per cluster, rotated by the eigenbasis and shifted to the
// cluster mean: q = Q y + mu. Cluster order, then dim-1 index, then dim-2.
Placement assemble_codebook(const std::vector<ClusterSpectrum>& spectra,
                            const std::vector<std::array<int, 2>>& levels,
                            LloydMaxTable& table);

struct RepairResult {
  std::vector<std::array<int, 2>> levels;
  int total_aps = 0;
  double score = 0.0;
  bool searched = false;  // false when the continuous levels were already integral
};

using PlacementScoreHook = std::function<double(const Placement&)>;

// Integer repair of the continuous levels: enumerate per-dimension candidates
// in [max(1, floor(V)), ceil(V)+1], cap each cluster's level product at
// 2^ceil(b_l), keep totals <= num_aps, score each assembled placement with the
// hook and return the best (ties: smallest level tuple lexicographically).
// The window reaches one step past the ceiling because cross-dimension trades
// (cut one dimension, raise the other past its ceiling) are exactly how tight
// budgets shake out; the per-cluster cap keeps that extra step from piling the
// whole budget onto one cluster.
RepairResult budget_repair(const std::vector<DimAllocation>& continuous,
                           int num_aps,
                           const std::vector<ClusterSpectrum>& spectra,
                           LloydMaxTable& table, const PlacementScoreHook& hook);

struct PdfvqResult {
  std::vector<ClusterSpectrum> spectra;
  std::vector<ClusterAllocation> cluster_alloc;
  std::vector<DimAllocation> dim_alloc;
  RepairResult repair;
  Placement placement;
};

// Full pipeline. The default score hook is the asymptotic sum rate at the top
// of the power grid over a held-out validation resample of the density.
PdfvqResult pdfvq_place(const ExperimentConfig& config);
PdfvqResult pdfvq_place(const ExperimentConfig& config,
                        const PlacementScoreHook& hook);

}  // namespace cfplace
