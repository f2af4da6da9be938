#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <cfplace/quadrature.hpp>
#include <cfplace/scenario.hpp>

#include "oracles.hpp"

using namespace cfplace;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.region = Region{-10.0, 10.0, -10.0, 10.0};
  cfg.gmm = {{1.0, {0.0, 0.0}, Sym2{1.0, 0.0, 1.0}}};
  cfg.num_aps = 4;
  cfg.num_users_placement = 50;
  cfg.num_users_eval = 2;
  cfg.power_grid_db = {10.0, 20.0};
  cfg.mc_iterations = 5;
  return cfg;
}

}  // namespace

TEST_CASE("user density: constructor validates the mixture") {
  const Region region{-10, 10, -10, 10};
  CHECK_THROWS_AS(UserDensity({{0.5, {0, 0}, Sym2{1, 0, 1}}}, region),
                  std::invalid_argument);  // weights sum to 0.5
  CHECK_THROWS_AS(UserDensity({{1.0, {0, 0}, Sym2{1, 2, 1}}}, region),
                  std::invalid_argument);  // not positive definite
  CHECK_THROWS_AS(UserDensity({{1.0, {0, 0}, Sym2{-1, 0, 1}}}, region),
                  std::invalid_argument);
  CHECK_THROWS_AS(UserDensity({}, region), std::invalid_argument);
  CHECK_NOTHROW(UserDensity(
      {{0.5, {0, 0}, Sym2{1, 0, 1}}, {0.5, {1, 1}, Sym2{2, 0.5, 1}}}, region));
}

TEST_CASE("user density: standard normal pdf value and normalization") {
  const UserDensity d({{1.0, {0, 0}, Sym2{1, 0, 1}}}, Region{-8, 8, -8, 8});
  CHECK(d.pdf({0, 0}) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
  // Independent coordinates: pdf factorizes into 1-D normals.
  CHECK(d.pdf({1.5, -0.5}) ==
        doctest::Approx(test_oracle::phi(1.5) * test_oracle::phi(-0.5))
            .epsilon(1e-12));
  const double mass = integrate2d_gl([&](Point2 p) { return d.pdf(p); },
                                     d.region(), 24, 16);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("user density: correlated pdf matches the quadratic form") {
  const Sym2 cov{2.0, 0.7, 1.0};
  const UserDensity d({{1.0, {1.0, -2.0}, cov}}, Region{-20, 20, -20, 20});
  const Point2 p{2.0, -1.0};
  const double dx = p.x - 1.0, dy = p.y + 2.0;
  const double det = cov.det();
  const double quad =
      (cov.c * dx * dx - 2.0 * cov.b * dx * dy + cov.a * dy * dy) / det;
  const double expected = std::exp(-0.5 * quad) / (2.0 * M_PI * std::sqrt(det));
  CHECK(d.pdf(p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("user density: sampling is deterministic per seed") {
  const UserDensity d(
      {{0.6, {5, -5}, Sym2{1, 0, 1}}, {0.4, {0, 5}, Sym2{2, 0.3, 1}}},
      Region{-20, 20, -20, 20});
  const auto a = d.sample(100, 77);
  const auto b = d.sample(100, 77);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
  const auto c = d.sample(100, 78);
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    same = same && a[i].x == c[i].x && a[i].y == c[i].y;
  CHECK_FALSE(same);
  // Free-function wrapper draws the same stream.
  const auto w = sample_users(d, 100, 77);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(w[i].x == a[i].x);
}

TEST_CASE("user density: sample moments recover mean and covariance") {
  const Sym2 cov{1e4, 2e4 / 3.0, 2e4};
  const Point2 mu{100.0, -50.0};
  const UserDensity d({{1.0, mu, cov}}, Region{-1000, 1000, -1000, 1000});
  const auto pts = d.sample(200000, 3);
  double sx = 0, sy = 0;
  for (const Point2& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  const double mx = sx / pts.size();
  const double my = sy / pts.size();
  // Standard errors: sqrt(var/n) ~ 0.25 / 0.32; allow 5 sigma.
  CHECK(std::abs(mx - mu.x) < 5.0 * std::sqrt(cov.a / pts.size()));
  CHECK(std::abs(my - mu.y) < 5.0 * std::sqrt(cov.c / pts.size()));
  double ca = 0, cb = 0, cc = 0;
  for (const Point2& p : pts) {
    const double dx = p.x - mx, dy = p.y - my;
    ca += dx * dx;
    cb += dx * dy;
    cc += dy * dy;
  }
  ca /= pts.size();
  cb /= pts.size();
  cc /= pts.size();
  CHECK(ca == doctest::Approx(cov.a).epsilon(0.02));
  CHECK(cb == doctest::Approx(cov.b).epsilon(0.05));
  CHECK(cc == doctest::Approx(cov.c).epsilon(0.02));
}

TEST_CASE("user density: mixture weights drive component frequencies") {
  // Far-apart components so membership is unambiguous from position.
  const UserDensity d(
      {{0.6, {500, -500}, Sym2{100, 0, 100}}, {0.4, {-500, 500}, Sym2{100, 0, 100}}},
      Region{-1000, 1000, -1000, 1000});
  const auto pts = d.sample(50000, 11);
  int first = 0;
  for (const Point2& p : pts)
    if (p.x > 0) ++first;
  CHECK(first / 50000.0 == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("method names parse and round-trip") {
  const std::vector<Method> all = {
      Method::kLloyd,        Method::kTsvq,        Method::kPdfvq,
      Method::kLloydMaxSum,  Method::kTsvqMaxSum,  Method::kPdfvqMaxSum,
      Method::kLloydMaxMin,  Method::kTsvqMaxMin,  Method::kPdfvqMaxMin};
  for (Method m : all) CHECK(parse_method(method_name(m)) == m);
  CHECK_THROWS_AS(parse_method("nonsense"), std::invalid_argument);

  CHECK(base_method(Method::kTsvqMaxSum) == Method::kTsvq);
  CHECK(base_method(Method::kPdfvqMaxMin) == Method::kPdfvq);
  CHECK(base_method(Method::kLloyd) == Method::kLloyd);
  CHECK(method_uses_maxsum(Method::kPdfvqMaxSum));
  CHECK_FALSE(method_uses_maxsum(Method::kPdfvqMaxMin));
  CHECK(method_uses_maxmin(Method::kLloydMaxMin));
  CHECK_FALSE(method_uses_maxmin(Method::kLloyd));
}

TEST_CASE("experiment config: validate names the offending field") {
  auto expect_reject = [](ExperimentConfig cfg, const char* needle) {
    try {
      cfg.validate();
      FAIL_CHECK("expected rejection for ", needle);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  ExperimentConfig ok = tiny_config();
  CHECK_NOTHROW(ok.validate());

  ExperimentConfig c1 = tiny_config();
  c1.num_aps = 0;
  expect_reject(c1, "num_aps");

  ExperimentConfig c2 = tiny_config();
  c2.num_users_eval = 8;  // K > M
  expect_reject(c2, "num_aps");

  ExperimentConfig c3 = tiny_config();
  c3.num_users_placement = 2;
  expect_reject(c3, "num_users_placement");

  ExperimentConfig c4 = tiny_config();
  c4.power_grid_db.clear();
  expect_reject(c4, "power_grid_db");

  ExperimentConfig c5 = tiny_config();
  c5.mc_iterations = 0;
  expect_reject(c5, "mc_iterations");

  ExperimentConfig c6 = tiny_config();
  c6.restarts = 0;
  expect_reject(c6, "restarts");

  ExperimentConfig c7 = tiny_config();
  c7.channel.gamma = -1.0;
  expect_reject(c7, "channel");

  ExperimentConfig c8 = tiny_config();
  c8.tail_fraction = 0.0;
  expect_reject(c8, "tail_fraction");

  ExperimentConfig c9 = tiny_config();
  c9.ascent_stall_window = 0;
  expect_reject(c9, "stall_window");

  ExperimentConfig c10 = tiny_config();
  c10.fading_draws = 0;
  expect_reject(c10, "fading_draws");
}

TEST_CASE("experiment config: top power is the grid maximum") {
  ExperimentConfig cfg = tiny_config();
  cfg.power_grid_db = {20.0, 5.0, 30.0, 10.0};
  CHECK(cfg.top_power_db() == 30.0);
}
