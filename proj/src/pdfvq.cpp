#include "cfplace/pdfvq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "cfplace/channel.hpp"

namespace cfplace {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }
}  // namespace

std::vector<ClusterSpectrum> cluster_spectra(const std::vector<GmmComponent>& gmm) {
  std::vector<ClusterSpectrum> out;
  out.reserve(gmm.size());
  for (const GmmComponent& comp : gmm) {
    ClusterSpectrum s;
    s.weight = comp.weight;
    s.mean = comp.mean;
    s.eig = eig_sym2(comp.cov);
    if (s.eig.l2 <= 0.0)
      throw std::invalid_argument("cluster_spectra: covariance not positive definite");
    s.c_geo = std::sqrt(s.eig.l1 * s.eig.l2);
    out.push_back(s);
  }
  return out;
}

std::vector<ClusterAllocation> cluster_allocation(
    const std::vector<ClusterSpectrum>& spectra, int num_aps) {
  if (spectra.empty()) throw std::invalid_argument("cluster_allocation: no clusters");
  if (num_aps < 1) throw std::invalid_argument("cluster_allocation: num_aps must be >= 1");
  double denom = 0.0;
  for (const ClusterSpectrum& s : spectra) denom += std::sqrt(s.weight * s.c_geo);
  std::vector<ClusterAllocation> out;
  out.reserve(spectra.size());
  for (const ClusterSpectrum& s : spectra) {
    ClusterAllocation a;
    a.count = num_aps * std::sqrt(s.weight * s.c_geo) / denom;
    a.bits = std::log2(a.count);
    out.push_back(a);
  }
  return out;
}

DimAllocation dimension_allocation(const ClusterAllocation& alloc, const Eig2& eig) {
  const double c_geo = std::sqrt(eig.l1 * eig.l2);
  DimAllocation d;
  d.bits[0] = 0.5 * alloc.bits + 0.5 * std::log2(eig.l1 / c_geo);
  d.bits[1] = 0.5 * alloc.bits + 0.5 * std::log2(eig.l2 / c_geo);
  d.levels[0] = std::exp2(d.bits[0]);
  d.levels[1] = std::exp2(d.bits[1]);
  return d;
}

std::vector<double> lloyd_max_unit(int levels) {
  if (levels < 1) throw std::invalid_argument("lloyd_max_unit: levels must be >= 1");
  if (levels == 1) return {0.0};
  const int v = levels;
  std::vector<double> c(v);
  for (int i = 0; i < v; ++i) c[i] = -4.0 + 8.0 * (i + 0.5) / v;

  std::vector<double> t(v + 1);
  for (int iter = 0; iter < 200000; ++iter) {
    t.front() = -std::numeric_limits<double>::infinity();
    t.back() = std::numeric_limits<double>::infinity();
    for (int i = 1; i < v; ++i) t[i] = 0.5 * (c[i - 1] + c[i]);
    double move = 0.0;
    for (int i = 0; i < v; ++i) {
      const double pl = i == 0 ? 0.0 : normal_pdf(t[i]);
      const double pr = i == v - 1 ? 0.0 : normal_pdf(t[i + 1]);
      const double ml = i == 0 ? 0.0 : normal_cdf(t[i]);
      const double mr = i == v - 1 ? 1.0 : normal_cdf(t[i + 1]);
      const double mass = mr - ml;
      const double next = mass > 0.0 ? (pl - pr) / mass : c[i];
      move = std::max(move, std::abs(next - c[i]));
      c[i] = next;
    }
    // The Gaussian fixed point is symmetric; projecting each iterate onto the
    // symmetric subspace removes round-off drift without changing the limit.
    for (int i = 0; i < v / 2; ++i) {
      const double s = 0.5 * (c[i] - c[v - 1 - i]);
      c[i] = s;
      c[v - 1 - i] = -s;
    }
    if (v % 2 == 1) c[v / 2] = 0.0;
    if (move < 1e-10) return c;
  }
  throw std::runtime_error("lloyd_max_unit: fixed-point iteration did not settle");
}

const std::vector<double>& LloydMaxTable::get(int levels) {
  auto it = table_.find(levels);
  if (it == table_.end()) it = table_.emplace(levels, lloyd_max_unit(levels)).first;
  return it->second;
}

bool LloydMaxTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;
  nlohmann::json j;
  try {
    in >> j;
    for (const auto& [key, arr] : j.at("levels").items()) {
      const int v = std::stoi(key);
      std::vector<double> cb = arr.get<std::vector<double>>();
      if (v >= 1 && static_cast<int>(cb.size()) == v) table_[v] = std::move(cb);
    }
  } catch (...) {
    return false;
  }
  return true;
}

void LloydMaxTable::save(const std::string& path) const {
  nlohmann::json levels = nlohmann::json::object();
  for (const auto& [v, cb] : table_) levels[std::to_string(v)] = cb;
  std::ofstream out(path);
  out << nlohmann::json{{"levels", levels}}.dump(2) << "\n";
}

std::vector<double> scalar_codebook(int levels, double lambda, LloydMaxTable& table) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scalar_codebook: lambda must be > 0");
  std::vector<double> cb = table.get(levels);
  const double s = std::sqrt(lambda);
  for (double& x : cb) x *= s;
  return cb;
}

Placement assemble_codebook(const std::vector<ClusterSpectrum>& spectra,
                            const std::vector<std::array<int, 2>>& levels,
                            LloydMaxTable& table) {
  if (spectra.size() != levels.size())
    throw std::invalid_argument("assemble_codebook: levels/spectra size mismatch");
  Placement out;
  for (std::size_t l = 0; l < spectra.size(); ++l) {
    const ClusterSpectrum& s = spectra[l];
    const std::vector<double> s1 = scalar_codebook(levels[l][0], s.eig.l1, table);
    const std::vector<double> s2 = scalar_codebook(levels[l][1], s.eig.l2, table);
    const Mat2 q = s.eig.q();
    for (double y1 : s1)
      for (double y2 : s2) out.push_back(s.mean + q * Point2{y1, y2});
  }
  return out;
}

namespace {

// Integer options for one continuous level count: floor .. ceil+1, clamped
// to >= 1.  The extra step above ceil lets one dimension absorb budget the
// other gives up (e.g. 2.93 x 2.93 -> 2 x 4); runaway growth is prevented by
// the per-cluster product cap below, not by this window.
std::vector<int> level_candidates(double v) {
  const int lo = std::max(1, static_cast<int>(std::floor(v)));
  const int hi = std::max(lo, static_cast<int>(std::ceil(v)) + 1);
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

}  // namespace

RepairResult budget_repair(const std::vector<DimAllocation>& continuous,
                           int num_aps,
                           const std::vector<ClusterSpectrum>& spectra,
                           LloydMaxTable& table, const PlacementScoreHook& hook) {
  const std::size_t n_clusters = continuous.size();
  if (n_clusters == 0) throw std::invalid_argument("budget_repair: no clusters");
  if (static_cast<int>(n_clusters) > num_aps)
    throw std::invalid_argument("budget_repair: more clusters than APs");

  RepairResult res;

  // Already integral and affordable: nothing to search.
  bool integral = true;
  int direct_total = 0;
  std::vector<std::array<int, 2>> direct(n_clusters);
  for (std::size_t l = 0; l < n_clusters; ++l) {
    for (int j = 0; j < 2; ++j) {
      const double v = continuous[l].levels[j];
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-9 || r < 1.0) integral = false;
      direct[l][j] = std::max(1, static_cast<int>(r));
    }
    direct_total += direct[l][0] * direct[l][1];
  }
  if (integral && direct_total <= num_aps) {
    res.levels = direct;
    res.total_aps = direct_total;
    res.score = std::numeric_limits<double>::quiet_NaN();
    res.searched = false;
    return res;
  }

  std::vector<std::vector<int>> cands(2 * n_clusters);
  // No cluster may exceed its bit budget rounded up: product <= 2^ceil(b_l).
  // This keeps the widened per-dimension window from piling APs onto one
  // cluster just because the score hook likes dense coverage there.
  std::vector<int> cluster_cap(n_clusters);
  for (std::size_t l = 0; l < n_clusters; ++l) {
    cands[2 * l] = level_candidates(continuous[l].levels[0]);
    cands[2 * l + 1] = level_candidates(continuous[l].levels[1]);
    const double b_l =
        std::log2(continuous[l].levels[0] * continuous[l].levels[1]);
    cluster_cap[l] = static_cast<int>(
        std::lround(std::pow(2.0, std::ceil(b_l - 1e-12))));
  }

  std::vector<std::size_t> odo(2 * n_clusters, 0);
  std::vector<std::array<int, 2>> best_levels, cur(n_clusters);
  double best_score = -std::numeric_limits<double>::infinity();
  bool found = false;
  while (true) {
    int total = 0;
    bool capped_ok = true;
    for (std::size_t l = 0; l < n_clusters; ++l) {
      cur[l][0] = cands[2 * l][odo[2 * l]];
      cur[l][1] = cands[2 * l + 1][odo[2 * l + 1]];
      if (cur[l][0] * cur[l][1] > cluster_cap[l]) capped_ok = false;
      total += cur[l][0] * cur[l][1];
    }
    if (capped_ok && total <= num_aps) {
      const double score = hook(assemble_codebook(spectra, cur, table));
      const bool better =
          !found || score > best_score ||
          (score == best_score &&
           std::lexicographical_compare(
               &cur[0][0], &cur[0][0] + 2 * n_clusters, &best_levels[0][0],
               &best_levels[0][0] + 2 * n_clusters));
      if (better) {
        best_levels = cur;
        best_score = score;
        found = true;
      }
    }
    std::size_t pos = 0;
    while (pos < odo.size() && ++odo[pos] == cands[pos].size()) odo[pos++] = 0;
    if (pos == odo.size()) break;
  }
  if (!found)
    throw std::runtime_error("budget_repair: no candidate fits the AP budget");

  res.levels = best_levels;
  res.total_aps = 0;
  for (const auto& lv : res.levels) res.total_aps += lv[0] * lv[1];
  res.score = best_score;
  res.searched = true;
  return res;
}

PdfvqResult pdfvq_place(const ExperimentConfig& config) {
  const UserDensity density = config.density();
  const std::vector<Point2> validation = density.sample(
      static_cast<std::size_t>(config.num_users_placement),
      derive_seed(config.seed, seed_salt::kValidation));
  const double rho = std::pow(10.0, config.top_power_db() / 10.0);
  const ChannelParams params = config.channel;
  PlacementScoreHook hook = [validation, params, rho](const Placement& aps) {
    double sum = 0.0;
    for (const Point2& u : validation)
      sum += std::log2(1.0 + asymptotic_snr_single(u, aps, params, rho));
    return sum / static_cast<double>(validation.size());
  };
  return pdfvq_place(config, hook);
}

PdfvqResult pdfvq_place(const ExperimentConfig& config,
                        const PlacementScoreHook& hook) {
  PdfvqResult res;
  res.spectra = cluster_spectra(config.gmm);
  if (static_cast<int>(res.spectra.size()) > config.num_aps)
    throw std::invalid_argument("pdfvq_place: more mixture clusters than APs");
  res.cluster_alloc = cluster_allocation(res.spectra, config.num_aps);
  res.dim_alloc.reserve(res.spectra.size());
  for (std::size_t l = 0; l < res.spectra.size(); ++l)
    res.dim_alloc.push_back(
        dimension_allocation(res.cluster_alloc[l], res.spectra[l].eig));
  LloydMaxTable table;
  res.repair =
      budget_repair(res.dim_alloc, config.num_aps, res.spectra, table, hook);
  res.placement = assemble_codebook(res.spectra, res.repair.levels, table);
  return res;
}

}  // namespace cfplace
