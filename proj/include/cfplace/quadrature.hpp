#pragma once

#include <array>
#include <cstddef>

#include "cfplace/geometry.hpp"

namespace cfplace {

// Composite Gauss-Legendre rules. Order is the per-panel point count (8 or
// 16); panels subdivide [a, b] uniformly.
namespace gl {

inline constexpr std::array<double, 4> kNodes8 = {
    0.18343464249564980, 0.52553240991632899, 0.79666647741362674,
    0.96028985649753623};
inline constexpr std::array<double, 4> kWeights8 = {
    0.36268378337836198, 0.31370664587788729, 0.22238103445337447,
    0.10122853629037626};

inline constexpr std::array<double, 8> kNodes16 = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739,
    0.61787624440264375, 0.75540440835500303, 0.86563120238783174,
    0.94457502307323258, 0.98940093499164993};
inline constexpr std::array<double, 8> kWeights16 = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254,
    0.14959598881657673, 0.12462897125553387, 0.09515851168249278,
    0.06225352393864789, 0.02715245941175409};

}  // namespace gl

template <typename F>
double integrate_gl(F&& f, double a, double b, int panels, int order = 8) {
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    double acc = 0.0;
    if (order == 16) {
      for (std::size_t i = 0; i < gl::kNodes16.size(); ++i) {
        const double dx = half * gl::kNodes16[i];
        acc += gl::kWeights16[i] * (f(mid + dx) + f(mid - dx));
      }
    } else {
      for (std::size_t i = 0; i < gl::kNodes8.size(); ++i) {
        const double dx = half * gl::kNodes8[i];
        acc += gl::kWeights8[i] * (f(mid + dx) + f(mid - dx));
      }
    }
    total += acc * half;
  }
  return total;
}

template <typename F>
double integrate2d_gl(F&& f, const Region& region, int panels, int order = 8) {
  auto outer = [&](double y) {
    auto inner = [&](double x) { return f(Point2{x, y}); };
    return integrate_gl(inner, region.xmin, region.xmax, panels, order);
  };
  return integrate_gl(outer, region.ymin, region.ymax, panels, order);
}

}  // namespace cfplace
