#include "cfplace/linalg2.hpp"

#include <cmath>
#include <stdexcept>

namespace cfplace {

namespace {

Point2 fix_sign(Point2 v) {
  // First nonzero component positive; keeps eigenvectors reproducible across
  // runs and platforms.
  if (v.x != 0.0) return v.x > 0.0 ? v : -1.0 * v;
  return v.y >= 0.0 ? v : -1.0 * v;
}

}  // namespace

Eig2 eig_sym2(const Sym2& s) {
  Eig2 e;
  const double half_tr = 0.5 * (s.a + s.c);
  const double half_diff = 0.5 * (s.a - s.c);
  const double disc = std::hypot(half_diff, s.b);
  e.l1 = half_tr + disc;
  e.l2 = half_tr - disc;

  if (s.b == 0.0) {
    if (s.a >= s.c) {
      e.v1 = {1.0, 0.0};
      e.v2 = {0.0, 1.0};
    } else {
      e.v1 = {0.0, 1.0};
      e.v2 = {1.0, 0.0};
    }
    return e;
  }

  // (S - l1 I) v = 0 gives v1 ~ (l1 - c, b); this vector cannot vanish when
  // b != 0 because |l1 - c| >= |b| fails only with b = 0.
  Point2 v1{e.l1 - s.c, s.b};
  const double n1 = norm(v1);
  if (n1 == 0.0) v1 = {s.b, e.l1 - s.a};
  v1 = (1.0 / norm(v1)) * v1;
  e.v1 = fix_sign(v1);
  e.v2 = fix_sign(Point2{-e.v1.y, e.v1.x});
  return e;
}

Mat2 sym_sqrt(const Sym2& s) {
  const Eig2 e = eig_sym2(s);
  if (e.l2 < -1e-12 * std::max(1.0, std::abs(e.l1)))
    throw std::invalid_argument("sym_sqrt: matrix not positive semidefinite");
  const double r1 = std::sqrt(std::max(0.0, e.l1));
  const double r2 = std::sqrt(std::max(0.0, e.l2));
  // Q diag(r) Q^T expanded by columns.
  return {r1 * e.v1.x * e.v1.x + r2 * e.v2.x * e.v2.x,
          r1 * e.v1.x * e.v1.y + r2 * e.v2.x * e.v2.y,
          r1 * e.v1.y * e.v1.x + r2 * e.v2.y * e.v2.x,
          r1 * e.v1.y * e.v1.y + r2 * e.v2.y * e.v2.y};
}

}  // namespace cfplace
