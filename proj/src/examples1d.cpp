#include <cfplace/examples1d.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>

#include <cfplace/format.hpp>
#include <cfplace/geometry.hpp>
#include <cfplace/metrics.hpp>
#include <cfplace/quadrature.hpp>
#include <cfplace/rng.hpp>
#include <cfplace/vq.hpp>

namespace cfplace {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kLog2E = 1.4426950408889634073599246810019;

double gauss_pdf(double x, double mean, double sigma) {
  const double u = (x - mean) / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * u * u);
}

// 5th percentile with the same order statistics and interpolation as
// rate_percentile, but O(n); permutes v.
double fast_percentile05(std::vector<double>& v) {
  const double h = 0.05 * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return *std::max_element(v.begin(), v.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
  const double hi_val = v[lo + 1];
  double lo_val = v[0];
  for (std::size_t i = 1; i <= lo; ++i) lo_val = std::max(lo_val, v[i]);
  const double frac = h - static_cast<double>(lo);
  return lo_val + frac * (hi_val - lo_val);
}

double mean_rate(const std::vector<double>& aps, const std::vector<double>& users,
                 double epsilon, std::vector<double>& rates) {
  rates.resize(users.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    rates[i] = kLog2E * std::log1p(snr_at(aps, users[i], epsilon));
    acc += rates[i];
  }
  return acc / static_cast<double>(users.size());
}

}  // namespace

void Config1D::validate() const {
  if (mixture.empty()) throw std::invalid_argument("1-D density needs at least one component");
  double wsum = 0.0;
  for (const Gaussian1D& g : mixture) {
    if (!(g.sigma > 0.0)) throw std::invalid_argument("1-D component sigma must be positive");
    if (!(g.weight > 0.0)) throw std::invalid_argument("1-D component weight must be positive");
    wsum += g.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("1-D component weights must sum to 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  if (num_aps < 1) throw std::invalid_argument("num_aps must be at least 1");
}

double Config1D::span_min() const {
  double v = mixture.front().mean - 3.0 * mixture.front().sigma;
  for (const Gaussian1D& g : mixture) v = std::min(v, g.mean - 3.0 * g.sigma);
  return v;
}

double Config1D::span_max() const {
  double v = mixture.front().mean + 3.0 * mixture.front().sigma;
  for (const Gaussian1D& g : mixture) v = std::max(v, g.mean + 3.0 * g.sigma);
  return v;
}

Config1D bimodal_symmetric() {
  Config1D cfg;
  cfg.mixture = {{0.5, -3.0, 1.0}, {0.5, 3.0, 1.0}};
  return cfg;
}

Config1D bimodal_skewed() {
  Config1D cfg;
  cfg.mixture = {{0.35, -3.0, 1.0}, {0.65, 4.0, 1.0}};
  return cfg;
}

Config1D unimodal_standard() {
  Config1D cfg;
  cfg.mixture = {{1.0, 0.0, 1.0}};
  return cfg;
}

double pdf1d(const Config1D& cfg, double x) {
  double acc = 0.0;
  for (const Gaussian1D& g : cfg.mixture) acc += g.weight * gauss_pdf(x, g.mean, g.sigma);
  return acc;
}

std::vector<double> sample_users1d(const Config1D& cfg, int n, std::uint64_t seed) {
  cfg.validate();
  if (n < 1) throw std::invalid_argument("sample_users1d: n must be at least 1");
  std::vector<double> cum(cfg.mixture.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < cfg.mixture.size(); ++l) {
    acc += cfg.mixture[l].weight;
    cum[l] = acc;
  }
  cum.back() = 1.0;
  Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // one uniform then one normal per point, in this order
    const double u = rng.uniform01();
    std::size_t l = 0;
    while (l + 1 < cum.size() && u >= cum[l]) ++l;
    out[static_cast<std::size_t>(i)] = cfg.mixture[l].mean + cfg.mixture[l].sigma * rng.normal();
  }
  return out;
}

double expected_inv_sq(const Config1D& cfg, double q) {
  const double eps = cfg.epsilon;
  const double seps = std::sqrt(eps);
  double total = 0.0;
  for (const Gaussian1D& g : cfg.mixture) {
    const double sigma = g.sigma;
    const double far = std::abs(q - g.mean) + 8.0 * sigma;
    // Near-field cutoff: far enough past sqrt(eps) that the kernel poles at
    // +/- i*sqrt(eps) no longer spoil polynomial quadrature, close enough
    // that a quadratic Taylor model of the density holds (error O(a^3)).
    double a = std::min(std::max(32.0 * seps, 1e-3), 0.25 * sigma);
    if (a >= far) a = 0.5 * far;
    const double fq = g.weight * gauss_pdf(q, g.mean, sigma);
    const double u = (q - g.mean) / sigma;
    const double fppq = fq * (u * u - 1.0) / (sigma * sigma);
    const double atn = std::atan(a / seps);
    // int_0^a [2 f(q) + f''(q) t^2] / (t^2 + eps) dt, exactly
    double acc = 2.0 * fq * atn / seps + fppq * (a - seps * atn);
    auto integrand = [&](double t) {
      const double num =
          g.weight * (gauss_pdf(q + t, g.mean, sigma) + gauss_pdf(q - t, g.mean, sigma));
      return num / (t * t + eps);
    };
    // geometric panels while the kernel still varies fast, then uniform ones
    double left = a;
    const double geo_end = std::min(0.25 * sigma, far);
    while (left < geo_end) {
      const double right = std::min(2.0 * left, geo_end);
      acc += integrate_gl(integrand, left, right, 1, 16);
      left = right;
    }
    if (left < far) {
      const int panels = static_cast<int>(std::ceil((far - left) / (0.25 * sigma)));
      acc += integrate_gl(integrand, left, far, panels, 16);
    }
    total += acc;
  }
  return total;
}

double snr_at(const std::vector<double>& aps, double p, double epsilon) {
  double acc = 0.0;
  for (double q : aps) {
    const double d = p - q;
    acc += 1.0 / (d * d + epsilon);
  }
  return acc;
}

Metrics1D metrics1d(const Config1D& cfg, const std::vector<double>& aps,
                    const std::vector<double>& users) {
  if (aps.empty()) throw std::invalid_argument("metrics1d: no AP positions");
  if (users.empty()) throw std::invalid_argument("metrics1d: no users");
  Metrics1D m;
  for (double q : aps) m.sum_snr += expected_inv_sq(cfg, q);
  std::vector<double> rates;
  m.sum_rate = mean_rate(aps, users, cfg.epsilon, rates);
  m.likely95 = rate_percentile(rates, 0.05);
  return m;
}

std::vector<SweepPoint1D> colocated_sweep(const Config1D& cfg, const std::vector<double>& users,
                                          double step) {
  cfg.validate();
  if (!(step > 0.0)) throw std::invalid_argument("colocated_sweep: step must be positive");
  if (users.empty()) throw std::invalid_argument("colocated_sweep: no users");
  // Grid centred on the span midpoint so a mirrored density yields the exact
  // mirrored grid (negation is lossless, accumulation is not).
  const double center = 0.5 * (cfg.span_min() + cfg.span_max());
  const int half =
      static_cast<int>(std::ceil((cfg.span_max() - center) / step - 1e-9));
  std::vector<SweepPoint1D> out;
  out.reserve(static_cast<std::size_t>(2 * half + 1));
  std::vector<double> aps(static_cast<std::size_t>(cfg.num_aps), 0.0);
  std::vector<double> rates(users.size());
  for (int j = -half; j <= half; ++j) {
    const double q = center + static_cast<double>(j) * step;
    std::fill(aps.begin(), aps.end(), q);
    SweepPoint1D pt;
    pt.q = q;
    pt.sum_snr = static_cast<double>(cfg.num_aps) * expected_inv_sq(cfg, q);
    pt.sum_rate = mean_rate(aps, users, cfg.epsilon, rates);
    pt.likely95 = fast_percentile05(rates);
    out.push_back(pt);
  }
  return out;
}

std::size_t sweep_argmax(const std::vector<SweepPoint1D>& sweep,
                         double SweepPoint1D::*member) {
  if (sweep.empty()) throw std::invalid_argument("sweep_argmax: empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].*member > sweep[best].*member) best = i;
  return best;
}

std::vector<double> semi_distributed_placement(const Config1D& cfg, int aps_at_first) {
  if (cfg.mixture.size() != 2)
    throw std::logic_error("semi-distributed layout needs a two-component density");
  if (cfg.num_aps != 4) throw std::logic_error("semi-distributed layout assumes four APs");
  if (aps_at_first < 1 || aps_at_first > 3)
    throw std::invalid_argument("aps_at_first must be 1, 2, or 3");
  std::vector<double> aps;
  aps.reserve(4);
  for (int i = 0; i < aps_at_first; ++i) aps.push_back(cfg.mixture[0].mean);
  for (int i = aps_at_first; i < 4; ++i) aps.push_back(cfg.mixture[1].mean);
  return aps;
}

std::vector<double> distributed_pair_placement(const Config1D& cfg, double d1, double d2) {
  if (cfg.num_aps != 4) throw std::logic_error("pair layout assumes four APs");
  if (cfg.mixture.size() == 1) {
    const double mu = cfg.mixture[0].mean;
    return {mu - d1, mu + d1, mu - d2, mu + d2};
  }
  if (cfg.mixture.size() == 2) {
    const double mu1 = cfg.mixture[0].mean;
    const double mu2 = cfg.mixture[1].mean;
    return {mu1 - d1, mu1 + d1, mu2 - d2, mu2 + d2};
  }
  throw std::logic_error("pair layout needs a one- or two-component density");
}

DistributedResult1D fully_distributed_search(const Config1D& cfg, Objective1D objective,
                                             const std::vector<double>& users) {
  cfg.validate();
  if (users.empty()) throw std::invalid_argument("fully_distributed_search: no users");
  std::vector<double> rates(users.size());
  auto evaluate = [&](double d1, double d2) -> double {
    const std::vector<double> aps = distributed_pair_placement(cfg, d1, d2);
    switch (objective) {
      case Objective1D::kSumSnr: {
        double s = 0.0;
        for (double q : aps) s += expected_inv_sq(cfg, q);
        return s;
      }
      case Objective1D::kSumRate:
        return mean_rate(aps, users, cfg.epsilon, rates);
      case Objective1D::kLikely95:
        mean_rate(aps, users, cfg.epsilon, rates);
        return fast_percentile05(rates);
    }
    throw std::logic_error("unknown 1-D objective");
  };

  constexpr double kDMax = 3.0;
  constexpr double kSteps[3] = {0.05, 0.005, 0.0005};
  double d[2] = {0.0, 0.0};
  double best = evaluate(d[0], d[1]);
  for (int round = 0; round < 12; ++round) {
    bool moved = false;
    for (int c = 0; c < 2; ++c) {
      double best_d = d[c];
      double lo = 0.0;
      double hi = kDMax;
      for (int level = 0; level < 3; ++level) {
        const double step = kSteps[level];
        const int n = static_cast<int>(std::round((hi - lo) / step));
        for (int i = 0; i <= n; ++i) {
          const double cand = lo + static_cast<double>(i) * step;
          const double val = (c == 0) ? evaluate(cand, d[1]) : evaluate(d[0], cand);
          if (val > best) {  // strict: ties keep the smaller displacement
            best = val;
            best_d = cand;
          }
        }
        lo = std::max(0.0, best_d - step);
        hi = std::min(kDMax, best_d + step);
      }
      if (best_d != d[c]) {
        d[c] = best_d;
        moved = true;
      }
    }
    if (!moved) break;
  }
  DistributedResult1D res;
  res.d1 = d[0];
  res.d2 = d[1];
  res.aps = distributed_pair_placement(cfg, d[0], d[1]);
  res.objective_value = best;
  return res;
}

std::vector<double> lloyd_1d(const Config1D& cfg, const std::vector<double>& users,
                             std::uint64_t seed) {
  cfg.validate();
  std::vector<Point2> pts;
  pts.reserve(users.size());
  for (double u : users) pts.push_back({u, 0.0});
  const LloydResult res = lloyd_run(pts, cfg.num_aps, seed, LloydConfig{});
  std::vector<double> xs;
  xs.reserve(res.placement.size());
  for (const Point2& p : res.placement) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  return xs;
}

namespace {

void write_curve_and_lines(const std::filesystem::path& path,
                           const std::vector<SweepPoint1D>& sweep,
                           double SweepPoint1D::*member,
                           const std::vector<std::pair<std::string, double>>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "label,q,value\n";
  for (const SweepPoint1D& pt : sweep)
    out << "colocated," << fmt_g9(pt.q) << ',' << fmt_g9(pt.*member) << '\n';
  for (const auto& [label, value] : lines) out << label << ",," << fmt_g9(value) << '\n';
  if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::vector<std::string> write_study_csv(const Config1D& cfg, const std::string& tag,
                                         const std::filesystem::path& outdir) {
  cfg.validate();
  std::filesystem::create_directories(outdir);
  const std::vector<double> users =
      sample_users1d(cfg, cfg.sample_count, derive_seed(cfg.seed, seed_salt::kEvaluation));
  const std::vector<SweepPoint1D> sweep = colocated_sweep(cfg, users);
  const std::vector<double> lloyd_aps =
      lloyd_1d(cfg, users, derive_seed(cfg.seed, seed_salt::kInit));
  const Metrics1D lloyd_m = metrics1d(cfg, lloyd_aps, users);

  std::vector<std::string> written;
  auto emit = [&](const std::string& name, double SweepPoint1D::*member,
                  const std::vector<std::pair<std::string, double>>& lines) {
    const std::filesystem::path path = outdir / (name + "_" + tag + ".csv");
    write_curve_and_lines(path, sweep, member, lines);
    written.push_back(path.string());
  };

  if (cfg.mixture.size() == 2) {
    const Metrics1D semi2 = metrics1d(cfg, semi_distributed_placement(cfg, 2), users);
    const Metrics1D semi3 = metrics1d(cfg, semi_distributed_placement(cfg, 3), users);
    const Metrics1D semi1 = metrics1d(cfg, semi_distributed_placement(cfg, 1), users);
    const DistributedResult1D fd_snr =
        fully_distributed_search(cfg, Objective1D::kSumSnr, users);
    const DistributedResult1D fd_rate =
        fully_distributed_search(cfg, Objective1D::kSumRate, users);
    const DistributedResult1D fd_95 =
        fully_distributed_search(cfg, Objective1D::kLikely95, users);
    const Metrics1D fd_snr_m = metrics1d(cfg, fd_snr.aps, users);
    const Metrics1D fd_rate_m = metrics1d(cfg, fd_rate.aps, users);
    const Metrics1D fd_95_m = metrics1d(cfg, fd_95.aps, users);

    emit("sum_snr", &SweepPoint1D::sum_snr,
         {{"distributed_2p2", semi2.sum_snr},
          {"distributed_3p1", semi3.sum_snr},
          {"distributed_1p3", semi1.sum_snr},
          {"fully_distributed", fd_snr_m.sum_snr},
          {"lloyd", lloyd_m.sum_snr}});
    emit("sum_rate", &SweepPoint1D::sum_rate,
         {{"distributed_2p2", semi2.sum_rate},
          {"distributed_3p1", semi3.sum_rate},
          {"distributed_1p3", semi1.sum_rate},
          {"fully_distributed", fd_rate_m.sum_rate},
          {"lloyd", lloyd_m.sum_rate}});
    emit("likely95", &SweepPoint1D::likely95,
         {{"distributed_2p2", semi2.likely95},
          {"distributed_3p1", semi3.likely95},
          {"distributed_1p3", semi1.likely95},
          {"fully_distributed", fd_95_m.likely95},
          {"lloyd", lloyd_m.likely95}});
  } else {
    emit("sum_snr", &SweepPoint1D::sum_snr, {{"lloyd", lloyd_m.sum_snr}});
    emit("sum_rate", &SweepPoint1D::sum_rate, {{"lloyd", lloyd_m.sum_rate}});
  }
  return written;
}

std::vector<std::string> run_line_study(const std::filesystem::path& outdir,
                                        std::uint64_t seed) {
  std::vector<std::string> all;
  for (auto& [cfg, tag] :
       std::vector<std::pair<Config1D, std::string>>{{bimodal_symmetric(), "symmetric"},
                                                     {bimodal_skewed(), "skewed"},
                                                     {unimodal_standard(), "unimodal"}}) {
    cfg.seed = seed;
    const std::vector<std::string> files = write_study_csv(cfg, tag, outdir);
    all.insert(all.end(), files.begin(), files.end());
  }
  return all;
}

}  // namespace cfplace
