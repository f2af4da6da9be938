#pragma once

#include "cfplace/geometry.hpp"

namespace cfplace {

// Symmetric 2x2 matrix [[a, b], [b, c]].
struct Sym2 {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  double det() const { return a * c - b * b; }
  double trace() const { return a + c; }
};

// General 2x2 matrix, row major.
struct Mat2 {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
};

inline Point2 operator*(const Mat2& m, Point2 p) {
  return {m.m00 * p.x + m.m01 * p.y, m.m10 * p.x + m.m11 * p.y};
}

// Eigendecomposition S = Q diag(l1, l2) Q^T with a deterministic convention:
// l1 >= l2, Q columns are v1, v2, and each eigenvector has its first nonzero
// component positive. Q is orthonormal; column signs are not a free parameter.
struct Eig2 {
  double l1 = 0.0;
  double l2 = 0.0;
  Point2 v1{1.0, 0.0};
  Point2 v2{0.0, 1.0};

  Mat2 q() const { return {v1.x, v2.x, v1.y, v2.y}; }
};

Eig2 eig_sym2(const Sym2& s);

// Symmetric square root Q diag(sqrt l) Q^T; requires S positive semidefinite.
Mat2 sym_sqrt(const Sym2& s);

}  // namespace cfplace
