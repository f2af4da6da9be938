#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cfplace {

// One-dimensional illustrative study: a handful of hand-placed AP layouts on a
// line network, compared under Gaussian-mixture user densities.  SNR model is
// the asymptotic one, psi(p) = sum_m 1/((p - q_m)^2 + epsilon), unit power.

struct Gaussian1D {
  double weight = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
};

struct Config1D {
  std::vector<Gaussian1D> mixture;
  int num_aps = 4;
  double epsilon = 1e-9;
  int sample_count = 100000;
  std::uint64_t seed = 1;

  void validate() const;
  // Span of interest: union of mean +/- 3 sigma over components.
  double span_min() const;
  double span_max() const;
};

Config1D bimodal_symmetric();  // equal weights, means -3 / +3, unit sigma
Config1D bimodal_skewed();     // weights 0.35 / 0.65, means -3 / +4, unit sigma
Config1D unimodal_standard();  // single standard normal

double pdf1d(const Config1D& cfg, double x);

// Positions drawn i.i.d. from the mixture; per point one uniform (component
// pick) then one normal, so the stream is reproducible.
std::vector<double> sample_users1d(const Config1D& cfg, int n, std::uint64_t seed);

// E[1/((P - q)^2 + eps)] for P ~ mixture.  The kernel concentrates mass
// ~pi/sqrt(eps) within |P - q| < O(sqrt(eps)), which sample averages cannot
// resolve; the near field is integrated in closed form against a local Taylor
// model of the density and the far field by panel Gauss-Legendre.
double expected_inv_sq(const Config1D& cfg, double q);

double snr_at(const std::vector<double>& aps, double p, double epsilon);

struct Metrics1D {
  double sum_snr = 0.0;   // E[psi], quadrature
  double sum_rate = 0.0;  // mean log2(1 + psi) over the user sample
  double likely95 = 0.0;  // 5th percentile of log2(1 + psi) over the sample
};

Metrics1D metrics1d(const Config1D& cfg, const std::vector<double>& aps,
                    const std::vector<double>& users);

struct SweepPoint1D {
  double q = 0.0;
  double sum_snr = 0.0;
  double sum_rate = 0.0;
  double likely95 = 0.0;
};

// All APs colocated at q, swept over a grid centred on the span midpoint so a
// mirrored configuration produces an exactly mirrored grid.
std::vector<SweepPoint1D> colocated_sweep(const Config1D& cfg,
                                          const std::vector<double>& users,
                                          double step = 0.01);

// Index of the sweep point with the largest value of the given member.
std::size_t sweep_argmax(const std::vector<SweepPoint1D>& sweep,
                         double SweepPoint1D::*member);

// aps_at_first of the four APs at the first mean, the rest at the second.
std::vector<double> semi_distributed_placement(const Config1D& cfg, int aps_at_first);

// Symmetric pair displacements: bimodal -> {mu1 -/+ d1, mu2 -/+ d2};
// unimodal -> both pairs straddle the single mean.
std::vector<double> distributed_pair_placement(const Config1D& cfg, double d1, double d2);

enum class Objective1D { kSumSnr, kSumRate, kLikely95 };

struct DistributedResult1D {
  double d1 = 0.0;
  double d2 = 0.0;
  std::vector<double> aps;
  double objective_value = 0.0;
};

// Coordinate ascent on (d1, d2) from (0, 0); each coordinate is line-searched
// on a grid over [0, 3] refined 0.05 -> 0.005 -> 0.0005, ties to smaller d.
DistributedResult1D fully_distributed_search(const Config1D& cfg, Objective1D objective,
                                             const std::vector<double>& users);

// Standard codebook training on the sample (positions embedded on the x axis);
// returns the AP coordinates sorted ascending.
std::vector<double> lloyd_1d(const Config1D& cfg, const std::vector<double>& users,
                             std::uint64_t seed);

// Writes the study CSVs for one density into outdir (created if missing):
// sum_snr_<tag>.csv and sum_rate_<tag>.csv always, likely95_<tag>.csv for
// bimodal densities.  Rows are "label,q,value"; the colocated rows carry the
// sweep coordinate, solution lines leave q empty.  Returns the paths written.
std::vector<std::string> write_study_csv(const Config1D& cfg, const std::string& tag,
                                         const std::filesystem::path& outdir);

// Full study: symmetric + skewed + unimodal densities, eight files.
std::vector<std::string> run_line_study(const std::filesystem::path& outdir,
                                        std::uint64_t seed = 1);

}  // namespace cfplace
