#ifndef TRANSEIG_GEOMETRY_TYPES_HPP
#define TRANSEIG_GEOMETRY_TYPES_HPP

#include <cmath>

namespace transeig {

/// A point or vector in the plane.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point, Point) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

}  // namespace transeig

#endif  // TRANSEIG_GEOMETRY_TYPES_HPP
