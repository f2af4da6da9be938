#pragma once

#include <cmath>
#include <vector>

namespace cfplace {

// Planar point, coordinates in meters unless a caller says otherwise.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2& operator+=(Point2& a, Point2 b) { a.x += b.x; a.y += b.y; return a; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Point2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Point2 a) { return std::sqrt(norm2(a)); }
inline double dist2(Point2 a, Point2 b) { return norm2(a - b); }
inline double dist(Point2 a, Point2 b) { return std::sqrt(dist2(a, b)); }

inline bool lex_less(Point2 a, Point2 b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Axis-aligned service region.
struct Region {
  double xmin = -1000.0;
  double xmax = 1000.0;
  double ymin = -1000.0;
  double ymax = 1000.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(Point2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

// AP locations; order is the codebook index order.
using Placement = std::vector<Point2>;

}  // namespace cfplace
