#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <cfplace/channel.hpp>
#include <cfplace/rng.hpp>
#include <cfplace/scenario.hpp>

using namespace cfplace;

namespace {

ChannelParams simple_params() {
  ChannelParams p;
  p.constant_c = 2.0;
  p.gamma = 2.0;
  p.epsilon = 1.0;
  return p;
}

}  // namespace

TEST_CASE("large-scale gain follows the regularized power law") {
  const ChannelParams p = simple_params();
  // d = 3: c / (d^gamma + eps) = 2 / (9 + 1) = 0.2.
  CHECK(large_scale_coeff({0, 0}, {3, 0}, p) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(large_scale_coeff({1, 1}, {4, 5}, p) ==
        doctest::Approx(2.0 / (25.0 + 1.0)).epsilon(1e-15));
  // Zero distance: epsilon caps the gain at c / eps.
  CHECK(large_scale_coeff({5, 5}, {5, 5}, p) == doctest::Approx(2.0).epsilon(1e-15));
  // Shadow factor multiplies straight through.
  CHECK(large_scale_coeff({0, 0}, {3, 0}, p, 2.5) ==
        doctest::Approx(0.5).epsilon(1e-15));

  ChannelParams frac = simple_params();
  frac.gamma = 3.5;
  const double d = 7.3;
  CHECK(large_scale_coeff({0, 0}, {d, 0}, frac) ==
        doctest::Approx(2.0 / (std::pow(d, 3.5) + 1.0)).epsilon(1e-14));
}

TEST_CASE("draw_channel: deterministic, correct shape, correct betas") {
  const ChannelParams p = simple_params();
  const Placement aps = {{0, 0}, {10, 0}, {0, 10}};
  const std::vector<Point2> users = {{1, 1}, {9, 1}};
  Rng r1(5), r2(5);
  const ChannelMatrix a = draw_channel(aps, users, p, r1);
  const ChannelMatrix b = draw_channel(aps, users, p, r2);
  REQUIRE(a.num_aps == 3);
  REQUIRE(a.num_users == 2);
  REQUIRE(a.entries.size() == 6);
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 2; ++k) {
      CHECK(a.g(m, k) == b.g(m, k));
      CHECK(a.beta(m, k) ==
            doctest::Approx(large_scale_coeff(users[k], aps[m], p)).epsilon(1e-15));
    }
}

TEST_CASE("draw_channel: fading is CN(0,1) so E|g|^2 = beta") {
  const ChannelParams p = simple_params();
  const Placement aps = {{0, 0}};
  const std::vector<Point2> users = {{4, 3}};  // d = 5, beta = 2/26
  const double beta = large_scale_coeff(users[0], aps[0], p);
  Rng rng(17);
  const int n = 200000;
  double power = 0.0, re = 0.0, im = 0.0;
  for (int i = 0; i < n; ++i) {
    const ChannelMatrix ch = draw_channel(aps, users, p, rng);
    power += std::norm(ch.g(0, 0));
    re += ch.g(0, 0).real();
    im += ch.g(0, 0).imag();
  }
  CHECK(power / n == doctest::Approx(beta).epsilon(0.02));
  CHECK(std::abs(re / n) < 5.0 * std::sqrt(beta / 2.0 / n));
  CHECK(std::abs(im / n) < 5.0 * std::sqrt(beta / 2.0 / n));
}

TEST_CASE("zf_snr: K=1 reduces to rho * |g|^2") {
  const ChannelParams p = simple_params();
  const Placement aps = {{0, 0}, {5, 5}, {-3, 2}};
  const std::vector<Point2> users = {{1, 2}};
  Rng rng(9);
  const ChannelMatrix ch = draw_channel(aps, users, p, rng);
  double g2 = 0.0;
  for (int m = 0; m < 3; ++m) g2 += std::norm(ch.g(m, 0));
  const double rho = 100.0;
  const auto snr = zf_snr(ch, rho);
  REQUIRE(snr.size() == 1);
  CHECK(snr[0] == doctest::Approx(rho * g2).epsilon(1e-12));
}

TEST_CASE("zf_snr: M=K=2 against the closed-form Gram inverse") {
  // Hand-built 2x2 channel, no randomness.
  ChannelMatrix ch;
  ch.num_aps = 2;
  ch.num_users = 2;
  ch.entries = {{1.0, 0.5}, {0.25, -0.75}, {-0.5, 1.0}, {2.0, 0.0}};
  ch.betas = {1, 1, 1, 1};
  // G^H G for column vectors g_k = (g(0,k), g(1,k)).
  const std::complex<double> g00 = ch.g(0, 0), g01 = ch.g(0, 1);
  const std::complex<double> g10 = ch.g(1, 0), g11 = ch.g(1, 1);
  const double a = std::norm(g00) + std::norm(g10);
  const std::complex<double> b = std::conj(g00) * g01 + std::conj(g10) * g11;
  const double d = std::norm(g01) + std::norm(g11);
  const double det = a * d - std::norm(b);
  // Inverse diagonal entries: d / det and a / det.
  const double rho = 10.0;
  const auto snr = zf_snr(ch, rho);
  REQUIRE(snr.size() == 2);
  CHECK(snr[0] == doctest::Approx(rho * det / d).epsilon(1e-12));
  CHECK(snr[1] == doctest::Approx(rho * det / a).epsilon(1e-12));

  const auto diag = zf_inverse_diagonal(ch);
  CHECK(rho / diag[0] == doctest::Approx(snr[0]).epsilon(1e-12));
  CHECK(rho / diag[1] == doctest::Approx(snr[1]).epsilon(1e-12));
}

TEST_CASE("zf_snr: invariant under AP (row) permutation") {
  const ChannelParams p = simple_params();
  const Placement aps = {{0, 0}, {10, 0}, {0, 10}, {7, 7}};
  const std::vector<Point2> users = {{1, 1}, {8, 2}, {3, 9}};
  Rng rng(23);
  const ChannelMatrix ch = draw_channel(aps, users, p, rng);
  ChannelMatrix perm = ch;
  for (int k = 0; k < perm.num_users; ++k) {
    std::swap(perm.g(0, k), perm.g(3, k));
    std::swap(perm.betas[0 * perm.num_users + k], perm.betas[3 * perm.num_users + k]);
  }
  const auto s1 = zf_snr(ch, 50.0);
  const auto s2 = zf_snr(perm, 50.0);
  for (std::size_t k = 0; k < s1.size(); ++k)
    CHECK(s1[k] == doctest::Approx(s2[k]).epsilon(1e-12));
}

TEST_CASE("zf_snr: singular Gram matrix throws") {
  ChannelMatrix ch;
  ch.num_aps = 2;
  ch.num_users = 2;
  // Identical columns: Gram matrix is rank 1.
  ch.entries = {{1.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}, {0.5, 0.5}};
  ch.betas = {1, 1, 1, 1};
  CHECK_THROWS_AS(zf_snr(ch, 1.0), std::runtime_error);
}

TEST_CASE("asymptotic SNR equals rho times the beta sum") {
  const ChannelParams p = simple_params();
  const Placement aps = {{0, 0}, {5, 0}, {0, 5}};
  const std::vector<Point2> users = {{1, 1}, {4, 4}};
  const double rho = 31.0;
  const auto psi = asymptotic_snr(aps, users, p, rho);
  REQUIRE(psi.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    double sum = 0.0;
    for (const Point2& q : aps) sum += large_scale_coeff(users[k], q, p);
    CHECK(psi[k] == doctest::Approx(rho * sum).epsilon(1e-14));
    CHECK(asymptotic_snr_single(users[k], aps, p, rho) ==
          doctest::Approx(psi[k]).epsilon(1e-15));
  }
}

TEST_CASE("ZF approaches the asymptotic SNR as M grows (K = 1)") {
  // APs on a ring around the user so every link has the same large-scale
  // gain. Under the heavy-tailed pathloss a uniform scatter is dominated by
  // the nearest AP, which keeps the fading variance of (1/M) * psi from
  // shrinking with M; the equal-gain ring isolates the 1/sqrt(M) averaging the
  // approximation relies on. Averaging |rel err| over independent fading
  // streams turns the per-seed coin flip into a stable ordering.
  ChannelParams p;
  p.constant_c = std::pow(30.0, 3.5);
  p.gamma = 3.5;
  p.epsilon = 1.0;
  const double rho = 1000.0;
  const std::vector<Point2> user = {{0.0, 0.0}};

  double prev_err = 1e9;
  for (int m_aps : {16, 64}) {
    Placement aps;
    for (int m = 0; m < m_aps; ++m) {
      const double ang = 2.0 * M_PI * (m + 0.5) / m_aps;
      aps.push_back({300.0 * std::cos(ang), 300.0 * std::sin(ang)});
    }
    const double target = asymptotic_snr(aps, user, p, rho)[0] / m_aps;
    double err = 0.0;
    const int reps = 10;
    const int draws = 100;
    for (int rep = 0; rep < reps; ++rep) {
      Rng fading(derive_seed(101, static_cast<std::uint64_t>(m_aps) * 100 + rep));
      double acc = 0.0;
      for (int t = 0; t < draws; ++t) {
        const ChannelMatrix ch = draw_channel(aps, user, p, fading);
        acc += zf_snr(ch, rho)[0] / m_aps;
      }
      err += std::abs(acc / draws - target) / target;
    }
    err /= reps;
    CHECK(err < 0.15);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("channel params helpers") {
  ChannelParams p;
  p.rho_r_db = 20.0;
  CHECK(p.rho_r_linear() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_FALSE(p.shadowing_enabled());
  p.shadowing_sigma_db = 8.0;
  CHECK(p.shadowing_enabled());
}

TEST_CASE("shadowing draws change the gain but keep determinism") {
  ChannelParams p = simple_params();
  p.shadowing_sigma_db = 8.0;
  const Placement aps = {{0, 0}};
  const std::vector<Point2> users = {{3, 0}};
  Rng r1(4), r2(4);
  const ChannelMatrix a = draw_channel(aps, users, p, r1);
  const ChannelMatrix b = draw_channel(aps, users, p, r2);
  CHECK(a.g(0, 0) == b.g(0, 0));
  CHECK(a.beta(0, 0) == b.beta(0, 0));
  // With shadowing the beta deviates from the pure pathloss (almost surely).
  const double pathloss = large_scale_coeff(users[0], aps[0], simple_params());
  CHECK(a.beta(0, 0) != pathloss);
  CHECK(a.beta(0, 0) > 0.0);
}
