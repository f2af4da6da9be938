#include "cfplace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfplace {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

UserDensity::UserDensity(std::vector<GmmComponent> components, Region region)
    : components_(std::move(components)), region_(region) {
  if (components_.empty())
    throw std::invalid_argument("UserDensity: no mixture components");
  if (region_.width() <= 0.0 || region_.height() <= 0.0)
    throw std::invalid_argument("UserDensity: empty region");
  double total = 0.0;
  for (const GmmComponent& c : components_) {
    if (!(c.weight > 0.0) || c.weight > 1.0)
      throw std::invalid_argument("UserDensity: component weight outside (0, 1]");
    if (c.cov.det() <= 0.0 || c.cov.a <= 0.0)
      throw std::invalid_argument("UserDensity: covariance not positive definite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("UserDensity: weights do not sum to 1");

  double cum = 0.0;
  for (const GmmComponent& c : components_) {
    sqrt_cov_.push_back(sym_sqrt(c.cov));
    const double det = c.cov.det();
    norm_const_.push_back(1.0 / (kTwoPi * std::sqrt(det)));
    inv_cov_.push_back(Sym2{c.cov.c / det, -c.cov.b / det, c.cov.a / det});
    cum += c.weight;
    cum_weight_.push_back(cum);
  }
  cum_weight_.back() = 1.0;  // guard the last bin against rounding
}

double UserDensity::pdf(Point2 p) const {
  double f = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Point2 d = p - components_[i].mean;
    const Sym2& s = inv_cov_[i];
    const double quad = s.a * d.x * d.x + 2.0 * s.b * d.x * d.y + s.c * d.y * d.y;
    f += components_[i].weight * norm_const_[i] * std::exp(-0.5 * quad);
  }
  return f;
}

Point2 UserDensity::sample(Rng& rng) const {
  const double u = rng.uniform01();
  std::size_t idx = 0;
  while (idx + 1 < cum_weight_.size() && u >= cum_weight_[idx]) ++idx;
  const Point2 z{rng.normal(), rng.normal()};
  return components_[idx].mean + sqrt_cov_[idx] * z;
}

std::vector<Point2> UserDensity::sample(std::size_t n, Rng& rng) const {
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
  return out;
}

std::vector<Point2> UserDensity::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  return sample(n, rng);
}

std::vector<Point2> sample_users(const UserDensity& density, std::size_t n,
                                 std::uint64_t seed) {
  return density.sample(n, seed);
}

double pdf_eval(const UserDensity& density, Point2 p) { return density.pdf(p); }

Method parse_method(const std::string& name) {
  if (name == "lloyd") return Method::kLloyd;
  if (name == "tsvq") return Method::kTsvq;
  if (name == "pdfvq") return Method::kPdfvq;
  if (name == "lloyd+maxsum") return Method::kLloydMaxSum;
  if (name == "tsvq+maxsum") return Method::kTsvqMaxSum;
  if (name == "pdfvq+maxsum") return Method::kPdfvqMaxSum;
  if (name == "lloyd+maxmin") return Method::kLloydMaxMin;
  if (name == "tsvq+maxmin") return Method::kTsvqMaxMin;
  if (name == "pdfvq+maxmin") return Method::kPdfvqMaxMin;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kLloyd: return "lloyd";
    case Method::kTsvq: return "tsvq";
    case Method::kPdfvq: return "pdfvq";
    case Method::kLloydMaxSum: return "lloyd+maxsum";
    case Method::kTsvqMaxSum: return "tsvq+maxsum";
    case Method::kPdfvqMaxSum: return "pdfvq+maxsum";
    case Method::kLloydMaxMin: return "lloyd+maxmin";
    case Method::kTsvqMaxMin: return "tsvq+maxmin";
    case Method::kPdfvqMaxMin: return "pdfvq+maxmin";
  }
  throw std::logic_error("method_name: bad enum");
}

bool method_uses_maxsum(Method m) {
  return m == Method::kLloydMaxSum || m == Method::kTsvqMaxSum ||
         m == Method::kPdfvqMaxSum;
}

bool method_uses_maxmin(Method m) {
  return m == Method::kLloydMaxMin || m == Method::kTsvqMaxMin ||
         m == Method::kPdfvqMaxMin;
}

Method base_method(Method m) {
  switch (m) {
    case Method::kLloydMaxSum:
    case Method::kLloydMaxMin: return Method::kLloyd;
    case Method::kTsvqMaxSum:
    case Method::kTsvqMaxMin: return Method::kTsvq;
    case Method::kPdfvqMaxSum:
    case Method::kPdfvqMaxMin: return Method::kPdfvq;
    default: return m;
  }
}

void ExperimentConfig::validate() const {
  UserDensity check(gmm, region);  // validates mixture and region
  (void)check;
  if (num_aps < 1) throw std::invalid_argument("config: num_aps must be >= 1");
  if (num_users_eval < 1)
    throw std::invalid_argument("config: num_users_eval must be >= 1");
  if (num_aps < num_users_eval)
    throw std::invalid_argument("config: num_aps must be >= num_users_eval (ZF needs M >= K)");
  if (num_users_placement < num_aps)
    throw std::invalid_argument("config: num_users_placement must be >= num_aps");
  if (power_grid_db.empty())
    throw std::invalid_argument("config: power_grid_db is empty");
  if (mc_iterations < 1)
    throw std::invalid_argument("config: mc_iterations must be >= 1");
  if (restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
  if (channel.gamma <= 0.0 || channel.constant_c <= 0.0 || channel.epsilon < 0.0)
    throw std::invalid_argument("config: channel parameters out of range");
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
    throw std::invalid_argument("config: tail_fraction outside (0, 1]");
  if (ascent_max_iters < 0)
    throw std::invalid_argument("config: ascent_max_iters negative");
  if (ascent_stall_window < 1)
    throw std::invalid_argument("config: ascent_stall_window must be >= 1");
  if (fading_draws < 1)
    throw std::invalid_argument("config: fading_draws must be >= 1");
}

double ExperimentConfig::top_power_db() const {
  return *std::max_element(power_grid_db.begin(), power_grid_db.end());
}

}  // namespace cfplace
