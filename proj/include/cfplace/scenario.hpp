#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfplace/channel.hpp"
#include "cfplace/geometry.hpp"
#include "cfplace/linalg2.hpp"
#include "cfplace/rng.hpp"

namespace cfplace {

struct GmmComponent {
  double weight = 1.0;
  Point2 mean{0.0, 0.0};
  Sym2 cov{1.0, 0.0, 1.0};  // m^2
};

// Gaussian mixture user density over a service region. Weights must sum to 1
// (1e-12) and covariances must be symmetric positive definite; the
// constructor validates. Samples are NOT clipped to the region.
class UserDensity {
 public:
  UserDensity(std::vector<GmmComponent> components, Region region);

  const std::vector<GmmComponent>& components() const { return components_; }
  const Region& region() const { return region_; }
  std::size_t num_components() const { return components_.size(); }

  double pdf(Point2 p) const;

  // Component choice by inverse CDF on the weights, then mean + sqrt(Cov) * z
  // with z a standard 2-D normal and sqrt the symmetric square root.
  Point2 sample(Rng& rng) const;
  std::vector<Point2> sample(std::size_t n, Rng& rng) const;
  std::vector<Point2> sample(std::size_t n, std::uint64_t seed) const;

 private:
  std::vector<GmmComponent> components_;
  Region region_;
  std::vector<Mat2> sqrt_cov_;     // per component
  std::vector<double> norm_const_; // 1 / (2 pi sqrt(det))
  std::vector<Sym2> inv_cov_;
  std::vector<double> cum_weight_;
};

std::vector<Point2> sample_users(const UserDensity& density, std::size_t n,
                                 std::uint64_t seed);
double pdf_eval(const UserDensity& density, Point2 p);

enum class Method {
  kLloyd,
  kTsvq,
  kPdfvq,
  kLloydMaxSum,
  kTsvqMaxSum,
  kPdfvqMaxSum,
  kLloydMaxMin,
  kTsvqMaxMin,
  kPdfvqMaxMin,
};

Method parse_method(const std::string& name);       // throws on unknown name
std::string method_name(Method method);
bool method_uses_maxsum(Method method);
bool method_uses_maxmin(Method method);
Method base_method(Method method);  // strips the ascent suffix

// 95%-likely convention: pooled takes the 5th percentile over every
// (trial, user) rate sample; per-user-expected first averages each trial's
// user rates across several fading draws, then pools, so the tail is over
// user positions rather than position-times-fading.
enum class TailConvention { kPooled, kPerUserExpected };

// Everything one placement-plus-evaluation run needs. validate() throws
// std::invalid_argument with the offending field in the message.
struct ExperimentConfig {
  std::vector<GmmComponent> gmm;
  Region region;
  int num_aps = 32;
  int num_users_placement = 2000;
  int num_users_eval = 4;  // K
  std::vector<double> power_grid_db = {5, 10, 15, 20, 25, 30};
  int mc_iterations = 2000;
  std::uint64_t seed = 1;
  Method method = Method::kLloyd;
  ChannelParams channel;
  int restarts = 10;

  // Rate-evaluation convention. Per-user-expected matches the rate definition
  // the placement objectives target (fading-averaged rate per user position),
  // so tail improvements from the placement are not drowned by fading noise.
  TailConvention convention = TailConvention::kPerUserExpected;
  int fading_draws = 32;  // fading realizations averaged per trial

  // Gradient refinement knobs (used when method carries +maxsum / +maxmin).
  double maxsum_delta = 1e4;
  double maxmin_delta = 3e4;
  int ascent_max_iters = 1000;
  int ascent_stall_window = 100;  // iterations without improvement => stop
  double tail_fraction = 0.05;

  void validate() const;
  UserDensity density() const { return UserDensity(gmm, region); }
  double top_power_db() const;
};

}  // namespace cfplace
