#ifndef TRANSEIG_NYSTROM_HPP
#define TRANSEIG_NYSTROM_HPP

// Nystrom discretization of the single- and double-layer boundary
// operators on a Mesh.
//
// Both kernels are split as K = K1 ln(4 sin^2((s-t)/2)) + K2 with K1, K2
// smooth; the log part is integrated with the trigonometric weights R_j and
// the remainder with the trapezoid rule pi/n. On graded (polygonal) meshes
// the double layer subtracts the static kernel K^D(s,t;0) and adds back its
// exact row integral -1/2, which keeps z'' out of the diagonal.

#include <cmath>
#include <numbers>
#include <vector>

#include "transeig/dense.hpp"
#include "transeig/geometry.hpp"
#include "transeig/special_functions.hpp"

namespace transeig {

/// Weights R_k(n) = R_j^{(n)}(t_i) for k = (i - j) mod 2n:
///   R = -(2 pi / n) sum_{l=1}^{n-1} cos(l tau) / l - (pi / n^2) cos(n tau),
/// tau = pi k / n. They integrate f(t) ln(4 sin^2((s-t)/2)) exactly for
/// trigonometric polynomials f of degree < n.
inline std::vector<double> log_weight_table(int n) {
  const double pi = std::numbers::pi;
  std::vector<double> table(2 * static_cast<std::size_t>(n));
  for (int k = 0; k < 2 * n; ++k) {
    const double tau = pi * k / n;
    double sum = 0.0;
    for (int l = 1; l < n; ++l) sum += std::cos(l * tau) / l;
    table[k] = -(2.0 * pi / n) * sum - (pi / (double(n) * n)) * std::cos(n * tau);
  }
  return table;
}

inline double log_weights(int n, int i, int j) {
  const int size = 2 * n;
  const int k = ((i - j) % size + size) % size;
  return log_weight_table(n)[k];
}

/// Discrete S and D at one wavenumber on one mesh.
struct LayerOperators {
  ComplexMatrix single_layer;
  ComplexMatrix double_layer;
  cplx wavenumber;
};

/// Assembles S_{kappa,n} and D_{kappa,n} together; they share all Bessel
/// evaluations, and |z(s) - z(t)| is symmetric, so each pair is visited once.
inline LayerOperators layer_operators(cplx kappa, const Mesh& mesh) {
  check_wavenumber(kappa);
  const double pi = std::numbers::pi;
  const cplx i_unit(0.0, 1.0);
  const std::size_t size = mesh.size();
  const int n = mesh.n();
  const double h = pi / n;
  const std::vector<double> weights = log_weight_table(n);

  ComplexMatrix S(size, size), D(size, size);
  std::vector<double> static_row_sum(size, 0.0);

  for (std::size_t i = 0; i < size; ++i) {
    const CurveSample& si = mesh[i];
    for (std::size_t j = i + 1; j < size; ++j) {
      const CurveSample& sj = mesh[j];
      const Point diff = si.z - sj.z;
      const double r = norm(diff);
      const double log_term = std::log(4.0 * std::pow(std::sin(mesh.parameter(i) / 2.0 - mesh.parameter(j) / 2.0), 2));
      const double weight_ij = weights[(i - j + size) % size];
      const double weight_ji = weights[(j - i + size) % size];
      if (r == 0.0) continue;
      const CylinderValues cv = cylinder_functions(kappa * r);

      // (x - y).n(y) |z'(y)| with the unnormalized normal (dz.y, -dz.x).
      const double proj_ij = dot(diff, Point{sj.dz.y, -sj.dz.x});
      const double proj_ji = -dot(diff, Point{si.dz.y, -si.dz.x});

      auto fill = [&](std::size_t row, std::size_t col, double jac, double proj, double weight) {
        const cplx ks = 0.25 * i_unit * cv.h0() * jac;
        const cplx ks1 = -cv.j0 * jac / (4.0 * pi);
        S(row, col) = weight * ks1 + h * (ks - ks1 * log_term);

        const cplx kd = 0.25 * i_unit * kappa * cv.h1() * proj / r;
        const cplx kd1 = -kappa * cv.j1 * proj / (4.0 * pi * r);
        // On graded meshes the static kernel is subtracted from the smooth
        // part and added back through the off-diagonal sum below, so the
        // off-diagonal entries coincide with the smooth-curve split.
        D(row, col) = weight * kd1 + h * (kd - kd1 * log_term);
        if (mesh.graded()) static_row_sum[row] += h * proj / (2.0 * pi * r * r);
      };
      fill(i, j, sj.jacobian, proj_ij, weight_ij);
      fill(j, i, si.jacobian, proj_ji, weight_ji);
    }
  }

  for (std::size_t i = 0; i < size; ++i) {
    const CurveSample& s = mesh[i];
    const double jac = s.jacobian;
    if (jac > 0.0) {
      const cplx ks2 = (0.25 * i_unit - kEulerGamma / (2.0 * pi) - std::log(kappa * jac / 2.0) / (2.0 * pi)) * jac;
      S(i, i) = weights[0] * (-jac / (4.0 * pi)) + h * ks2;
    } else {
      S(i, i) = 0.0;
    }
    if (mesh.graded()) {
      // Log part has no diagonal contribution (J1(0) = 0) and the smooth
      // difference K^D(t,t;kappa) - K^D(t,t;0) vanishes.
      D(i, i) = -0.5 - static_row_sum[i];
    } else {
      const double curvature_term = dot(s.ddz, Point{s.dz.y, -s.dz.x}) / (jac * jac);
      D(i, i) = h * curvature_term / (4.0 * pi);
    }
  }
  return {std::move(S), std::move(D), kappa};
}

inline ComplexMatrix single_layer_matrix(cplx kappa, const Mesh& mesh) {
  return layer_operators(kappa, mesh).single_layer;
}

inline ComplexMatrix double_layer_matrix(cplx kappa, const Mesh& mesh) {
  return layer_operators(kappa, mesh).double_layer;
}

/// The 4n x 4n block operator
///   [ I/2 + D_k   -S_k  ]
///   [ I/2 + D_k1  -S_k1 ],  k1 = k sqrt(mu).
inline ComplexMatrix assemble_block_system(cplx kappa, double mu, const Mesh& mesh) {
  if (!(mu > 1.0)) throw std::invalid_argument("refractive index mu must exceed 1");
  const LayerOperators outer = layer_operators(kappa, mesh);
  const LayerOperators inner = layer_operators(kappa * std::sqrt(mu), mesh);
  const std::size_t m = mesh.size();
  ComplexMatrix z(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const cplx delta = (i == j) ? 0.5 : 0.0;
      z(i, j) = delta + outer.double_layer(i, j);
      z(i, m + j) = -outer.single_layer(i, j);
      z(m + i, j) = delta + inner.double_layer(i, j);
      z(m + i, m + j) = -inner.single_layer(i, j);
    }
  }
  return z;
}

}  // namespace transeig

#endif  // TRANSEIG_NYSTROM_HPP
