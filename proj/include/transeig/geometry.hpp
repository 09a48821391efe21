#ifndef TRANSEIG_GEOMETRY_HPP
#define TRANSEIG_GEOMETRY_HPP

// Boundary curves of the test domains and the quadrature meshes built on
// them. Smooth curves are sampled on the equidistant knots t_j = pi j / n;
// polygons are sampled through a sigmoid change of variables per edge, so
// the composed parametrization has vanishing speed at every vertex.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "transeig/geometry_types.hpp"

namespace transeig {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Position and derivatives of a parametrization at one parameter value.
struct CurveSample {
  Point z;
  Point dz;
  Point ddz;
  Point normal;     // unit outward normal (dz.y, -dz.x) / |dz|
  double jacobian;  // |dz|
  bool corner = false;
};

struct Disk {
  double radius = 0.5;
};

/// sqrt(0.25 + cos^2 t) (cos t, sin t).
struct Peanut {};

/// Counter-clockwise polygon; vertex k sits at parameter 2 pi k / m.
struct Polygon {
  std::vector<Point> vertices;
};

/// Closed 2 pi-periodic boundary curve with optional corners.
class BoundaryCurve {
 public:
  using Kind = std::variant<Disk, Peanut, Polygon>;

  explicit BoundaryCurve(Kind kind, double grading = 3.0) : kind_(std::move(kind)), grading_(grading) {
    if (!(grading_ >= 2.0)) throw std::invalid_argument("grading exponent must be >= 2");
    if (auto* disk = std::get_if<Disk>(&kind_); disk && !(disk->radius > 0.0))
      throw std::invalid_argument("disk radius must be positive");
    if (auto* poly = std::get_if<Polygon>(&kind_)) {
      if (poly->vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
      double area2 = 0.0;
      const auto& v = poly->vertices;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const Point a = v[k], b = v[(k + 1) % v.size()];
        area2 += a.x * b.y - b.x * a.y;
      }
      if (area2 == 0.0) throw std::invalid_argument("degenerate polygon");
      // Outward normals below assume counter-clockwise orientation.
      if (area2 < 0.0) std::reverse(poly->vertices.begin() + 1, poly->vertices.end());
    }
  }

  const Kind& kind() const { return kind_; }
  double grading() const { return grading_; }
  bool has_corners() const { return std::holds_alternative<Polygon>(kind_); }

  /// Corner parameters T_1 < ... < T_m in [0, 2 pi); empty for smooth curves.
  std::vector<double> corner_parameters() const {
    std::vector<double> out;
    if (const auto* poly = std::get_if<Polygon>(&kind_)) {
      const std::size_t m = poly->vertices.size();
      for (std::size_t k = 0; k < m; ++k) out.push_back(kTwoPi * static_cast<double>(k) / m);
    }
    return out;
  }

  /// Base (ungraded) parametrization. For polygons the derivative is the
  /// constant edge velocity; at a vertex the returned sample is flagged
  /// as a corner, uses the outgoing edge, and carries the averaged normal.
  CurveSample base(double t) const;

  /// Parametrization composed with the sigmoid grading on polygons;
  /// identical to base() for smooth curves.
  CurveSample evaluate(double t) const;

 private:
  Kind kind_;
  double grading_;
};

/// Value and first two derivatives of the sigmoid grading map on a panel.
struct SigmoidValue {
  double w;
  double dw;
  double ddw;
};

/// Sigmoid transform on [t0, t1] with grading exponent p >= 2:
///   w(s) = (t1 v^p + t0 (1-v)^p) / (v^p + (1-v)^p),
///   v(s) = (1/2 - 1/p) u^3 + u / p + 1/2,  u = (2s - t0 - t1) / (t1 - t0).
/// w fixes both endpoints and has zero derivative there.
inline SigmoidValue sigmoid_transform(double s, double t0, double t1, double p) {
  if (!(t0 < t1)) throw std::invalid_argument("sigmoid_transform: requires t0 < t1");
  if (!(p >= 2.0)) throw std::invalid_argument("sigmoid_transform: requires p >= 2");
  const double width = t1 - t0;
  const double u = std::clamp((2.0 * s - t0 - t1) / width, -1.0, 1.0);
  const double c3 = 0.5 - 1.0 / p;
  const double v = c3 * u * u * u + u / p + 0.5;
  const double dv = (3.0 * c3 * u * u + 1.0 / p) * (2.0 / width);
  const double ddv = 6.0 * c3 * u * (2.0 / width) * (2.0 / width);

  const double vc = 1.0 - v;
  const double a = std::pow(v, p), b = std::pow(vc, p);
  const double den = a + b;
  const double g = a / den;
  // g'(v) = p v^{p-1}(1-v)^{p-1} / den^2.
  const double num = p * std::pow(v, p - 1.0) * std::pow(vc, p - 1.0);
  const double dg = num / (den * den);
  const double dnum = p * (p - 1.0) * (std::pow(v, p - 2.0) * std::pow(vc, p - 1.0) -
                                       std::pow(v, p - 1.0) * std::pow(vc, p - 2.0));
  const double dden = p * (std::pow(v, p - 1.0) - std::pow(vc, p - 1.0));
  const double ddg = (dnum * den - 2.0 * num * dden) / (den * den * den);

  return {t0 + width * g, width * dg * dv, width * (ddg * dv * dv + dg * ddv)};
}

inline CurveSample finish_sample(Point z, Point dz, Point ddz) {
  const double jac = norm(dz);
  Point normal{0.0, 0.0};
  if (jac > 0.0) normal = (1.0 / jac) * Point{dz.y, -dz.x};
  return {z, dz, ddz, normal, jac, false};
}

inline CurveSample BoundaryCurve::base(double t) const {
  if (const auto* disk = std::get_if<Disk>(&kind_)) {
    const double r = disk->radius, c = std::cos(t), s = std::sin(t);
    return finish_sample({r * c, r * s}, {-r * s, r * c}, {-r * c, -r * s});
  }
  if (std::holds_alternative<Peanut>(kind_)) {
    const double c = std::cos(t), s = std::sin(t);
    const double q = 0.25 + c * c;
    const double rho = std::sqrt(q);
    // rho' = -sin t cos t / rho, rho'' = (sin^2 - cos^2)/rho - rho'^2 / rho
    const double drho = -s * c / rho;
    const double ddrho = (s * s - c * c) / rho - drho * drho / rho;
    const Point z{rho * c, rho * s};
    const Point dz{drho * c - rho * s, drho * s + rho * c};
    const Point ddz{ddrho * c - 2.0 * drho * s - rho * c, ddrho * s + 2.0 * drho * c - rho * s};
    return finish_sample(z, dz, ddz);
  }
  const auto& v = std::get<Polygon>(kind_).vertices;
  const std::size_t m = v.size();
  const double panel = kTwoPi / static_cast<double>(m);
  double tt = std::fmod(t, kTwoPi);
  if (tt < 0.0) tt += kTwoPi;
  std::size_t k = std::min(static_cast<std::size_t>(tt / panel), m - 1);
  const double local = tt - panel * static_cast<double>(k);
  const Point a = v[k], b = v[(k + 1) % m];
  const Point velocity = (1.0 / panel) * (b - a);
  CurveSample out = finish_sample(a + local * velocity, velocity, {0.0, 0.0});
  const double snap = 1e-13 * kTwoPi;
  if (local < snap || panel - local < snap) {
    // Vertex: average the one-sided normals.
    const std::size_t vertex = local < snap ? k : (k + 1) % m;
    const Point in_edge = v[vertex] - v[(vertex + m - 1) % m];
    const Point out_edge = v[(vertex + 1) % m] - v[vertex];
    const Point n_in = (1.0 / norm(in_edge)) * Point{in_edge.y, -in_edge.x};
    const Point n_out = (1.0 / norm(out_edge)) * Point{out_edge.y, -out_edge.x};
    const Point avg = n_in + n_out;
    out.z = v[vertex];
    out.normal = (1.0 / norm(avg)) * avg;
    out.corner = true;
  }
  return out;
}

inline CurveSample BoundaryCurve::evaluate(double t) const {
  if (!has_corners()) return base(t);
  const auto& v = std::get<Polygon>(kind_).vertices;
  const std::size_t m = v.size();
  const double panel = kTwoPi / static_cast<double>(m);
  double tt = std::fmod(t, kTwoPi);
  if (tt < 0.0) tt += kTwoPi;
  const std::size_t k = std::min(static_cast<std::size_t>(tt / panel), m - 1);
  const double t0 = panel * static_cast<double>(k);
  const double t1 = panel * static_cast<double>(k + 1);
  const SigmoidValue g = sigmoid_transform(tt, t0, t1, grading_);
  CurveSample s = base(g.w);
  // z(w(t))' = z'(w) w',  z(w(t))'' = z''(w) w'^2 + z'(w) w'' with z'' = 0 on edges.
  const Point velocity = s.dz;
  s.dz = g.dw * velocity;
  s.ddz = g.ddw * velocity;
  s.jacobian = norm(s.dz);
  if (s.corner || s.jacobian == 0.0) {
    s.jacobian = 0.0;
    s.dz = {0.0, 0.0};
    s.ddz = {0.0, 0.0};
    if (!s.corner) {
      // Landed on a vertex after grading: recover the vertex data.
      s = base(std::abs(g.w - t0) < std::abs(g.w - t1) ? t0 : std::fmod(t1, kTwoPi));
      s.dz = {0.0, 0.0};
      s.ddz = {0.0, 0.0};
      s.jacobian = 0.0;
    }
    s.corner = true;
  }
  return s;
}

/// Quadrature nodes t_j = pi j / n, j = 0..2n-1, with cached curve data.
class Mesh {
 public:
  Mesh(const BoundaryCurve& curve, int n) : n_(n), graded_(curve.has_corners()) {
    if (n < 4) throw std::invalid_argument("mesh: n must be at least 4");
    nodes_.reserve(2 * static_cast<std::size_t>(n));
    for (int j = 0; j < 2 * n; ++j) {
      const double t = std::numbers::pi * j / n;
      params_.push_back(t);
      nodes_.push_back(curve.evaluate(t));
    }
  }

  int n() const { return n_; }
  std::size_t size() const { return nodes_.size(); }
  bool graded() const { return graded_; }
  double parameter(std::size_t j) const { return params_[j]; }
  const CurveSample& operator[](std::size_t j) const { return nodes_[j]; }
  const std::vector<CurveSample>& nodes() const { return nodes_; }

 private:
  int n_;
  bool graded_;
  std::vector<double> params_;
  std::vector<CurveSample> nodes_;
};

inline Mesh build_mesh(const BoundaryCurve& curve, int n) { return Mesh(curve, n); }

/// Named test domains.
namespace shapes {

inline BoundaryCurve disk(double radius = 0.5) { return BoundaryCurve(Disk{radius}); }

inline BoundaryCurve peanut() { return BoundaryCurve(Peanut{}); }

/// Unit square (side 1) centred at the origin.
inline BoundaryCurve square(double grading = 3.0) {
  return BoundaryCurve(Polygon{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}}, grading);
}

inline BoundaryCurve triangle(double grading = 3.0) {
  const double h = std::sqrt(3.0) / 2.0;
  return BoundaryCurve(Polygon{{{-h, -0.5}, {h, -0.5}, {0.0, 1.0}}}, grading);
}

inline BoundaryCurve lshape(double grading = 3.0) {
  const double a = std::sqrt(2.0), b = std::sqrt(2.0) / 2.0;
  return BoundaryCurve(Polygon{{{a, b}, {b, a}, {0.0, b}, {-b, a}, {-a, b}, {0.0, -b}}}, grading);
}

inline BoundaryCurve pentagon(double grading = 3.0) {
  std::vector<Point> v;
  for (int j = 0; j < 5; ++j)
    v.push_back({std::cos(kTwoPi * j / 5.0), std::sin(kTwoPi * j / 5.0)});
  return BoundaryCurve(Polygon{std::move(v)}, grading);
}

inline BoundaryCurve by_name(std::string_view name, double grading = 3.0) {
  if (name == "disk") return disk();
  if (name == "peanut") return peanut();
  if (name == "square") return square(grading);
  if (name == "triangle") return triangle(grading);
  if (name == "lshape") return lshape(grading);
  if (name == "pentagon") return pentagon(grading);
  throw std::invalid_argument("unknown shape '" + std::string(name) + "'");
}

}  // namespace shapes

}  // namespace transeig

#endif  // TRANSEIG_GEOMETRY_HPP
