#ifndef TRANSEIG_SPECIAL_FUNCTIONS_HPP
#define TRANSEIG_SPECIAL_FUNCTIONS_HPP

// Cylinder functions of order 0 and 1 for complex argument, and the 2D
// Helmholtz fundamental solution built on them.
//
// Two algorithms cover the range |z| <= 1e3:
//  - ascending series (with the logarithmic terms for Y) for |z| <= 17,
//    summed in long double so that the cancellation along the real axis
//    stays near 1e-12 relative;
//  - Hankel asymptotic expansions for |z| > 17, truncated at the smallest
//    term, which is below 3e-16 of the leading term there.
// In the upper half plane H = J + iY is exponentially smaller than J and Y,
// so H is never formed from them there: the asymptotic branch keeps H
// directly and the series branch takes H from Steed's continued fraction
// for K(-iz) once Im z > 1.
// Logarithms and square roots use the principal branch, so Y and H are
// analytic on C minus the non-positive real axis.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "transeig/geometry_types.hpp"

namespace transeig {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kMaxBesselArgument = 1e3;
inline constexpr double kSeriesAsymptoticSplit = 17.0;

/// J0, J1, Y0, Y1 and H0, H1 evaluated at the same argument.
struct CylinderValues {
  cplx j0, j1, y0, y1;
  cplx hankel0, hankel1;

  cplx h0() const { return hankel0; }
  cplx h1() const { return hankel1; }
};

namespace detail {

inline void check_argument(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("bessel: non-finite argument");
  if (std::abs(z) > kMaxBesselArgument)
    throw std::domain_error("bessel: |z| exceeds supported range 1e3");
}

inline CylinderValues series(cplx zd) {
  using lcplx = std::complex<long double>;
  const lcplx z(zd.real(), zd.imag());
  const lcplx half = z / 2.0L;
  const lcplx q = half * half;
  const long double qmag = std::abs(q);

  // t_k = (-q)^k / (k!)^2, u_k = t_k / (k+1), H_k = harmonic number.
  lcplx t = 1.0L;
  long double harmonic = 0.0L;
  lcplx sum_j0 = 0.0L, sum_j1 = 0.0L, sum_y0 = 0.0L, sum_y1 = 0.0L;
  long double max_term = 0.0L;
  for (int k = 0; k < 300; ++k) {
    if (k > 0) {
      t *= -q / (static_cast<long double>(k) * static_cast<long double>(k));
      harmonic += 1.0L / k;
    }
    const long double next_harmonic = harmonic + 1.0L / (k + 1);
    const lcplx u = t / static_cast<long double>(k + 1);
    sum_j0 += t;
    sum_j1 += u;
    sum_y0 += harmonic * t;
    sum_y1 += (harmonic + next_harmonic) * u;
    const long double mag = std::abs(t) * (next_harmonic + 1.0L);
    if (mag > max_term) max_term = mag;
    if (k * k > qmag && mag < 1e-21L * max_term) break;
  }

  const long double pi = std::numbers::pi_v<long double>;
  const lcplx log_term = std::log(half) + static_cast<long double>(kEulerGamma);
  const lcplx j0 = sum_j0;
  const lcplx j1 = half * sum_j1;
  const lcplx y0 = (2.0L / pi) * (log_term * j0 - sum_y0);
  const lcplx y1 = (2.0L / pi) * log_term * j1 - 2.0L / (pi * z) - half * sum_y1 / pi;

  auto to_double = [](lcplx v) {
    return cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  };
  const lcplx i(0.0L, 1.0L);
  return {to_double(j0), to_double(j1), to_double(y0), to_double(y1), to_double(j0 + i * y0),
          to_double(j1 + i * y1)};
}

// H0(z), H1(z) for Im z > 0, |z| >= 2, through K0, K1 at w = -iz
// (Re w > 0) by Steed's method:
//   H0(z) = -(2i/pi) K0(w),  H1(z) = -(2/pi) K1(w).
inline std::pair<cplx, cplx> hankel_continued_fraction(cplx z) {
  const double pi = std::numbers::pi;
  const cplx w(z.imag(), -z.real());
  cplx b = 2.0 * (1.0 + w);
  cplx d = 1.0 / b;
  cplx h = d, delh = d;
  cplx q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  cplx q = a1, c = a1;
  double a = -a1;
  cplx s = 1.0 + q * delh;
  for (int i = 2; i < 20000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / static_cast<double>(i);
    const cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s)) break;
  }
  h *= a1;
  const cplx k0 = std::sqrt(pi / (2.0 * w)) * std::exp(-w) / s;
  const cplx k1 = k0 * (w + 0.5 - h) / w;
  return {cplx(0.0, -2.0 / pi) * k0, (-2.0 / pi) * k1};
}

// Returns {sum i^k a_k(nu)/z^k, sum (-i)^k a_k(nu)/z^k}.
inline std::pair<cplx, cplx> hankel_asymptotic_sums(int order, cplx z) {
  const double four_nu2 = 4.0 * order * order;
  const cplx iz_inv = cplx(0.0, 1.0) / z;
  cplx term_plus = 1.0, term_minus = 1.0;
  cplx sum_plus = 1.0, sum_minus = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double factor = (four_nu2 - odd * odd) / (8.0 * k);
    term_plus *= factor * iz_inv;
    term_minus *= -factor * iz_inv;
    const double mag = std::abs(term_plus);
    if (mag > previous) break;
    sum_plus += term_plus;
    sum_minus += term_minus;
    if (mag < 1e-17) break;
    previous = mag;
  }
  return {sum_plus, sum_minus};
}

inline CylinderValues asymptotic(cplx z) {
  const double pi = std::numbers::pi;
  const cplx i(0.0, 1.0);
  const cplx amplitude = std::sqrt(2.0 / (pi * z));
  CylinderValues out;
  for (int order = 0; order <= 1; ++order) {
    const cplx omega = z - (order * 0.5 + 0.25) * pi;
    const auto [sum_plus, sum_minus] = hankel_asymptotic_sums(order, z);
    const cplx h1 = amplitude * std::exp(i * omega) * sum_plus;
    const cplx h2 = amplitude * std::exp(-i * omega) * sum_minus;
    const cplx j = 0.5 * (h1 + h2);
    const cplx y = (h1 - h2) / (2.0 * i);
    if (order == 0) {
      out.j0 = j;
      out.y0 = y;
      out.hankel0 = h1;
    } else {
      out.j1 = j;
      out.y1 = y;
      out.hankel1 = h1;
    }
  }
  return out;
}

}  // namespace detail

/// All four cylinder functions at z != 0 (Y is singular at the origin).
inline CylinderValues cylinder_functions(cplx z) {
  detail::check_argument(z);
  if (z == cplx(0.0))
    throw std::domain_error("bessel: Y and H are singular at z = 0");
  if (std::abs(z) <= kSeriesAsymptoticSplit) {
    CylinderValues v = detail::series(z);
    if (z.imag() > 1.0 && std::abs(z) >= 2.0)
      std::tie(v.hankel0, v.hankel1) = detail::hankel_continued_fraction(z);
    return v;
  }
  return detail::asymptotic(z);
}

/// Bessel function of the first kind, order 0 or 1.
inline cplx bessel_j(int order, cplx z) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_j: order must be 0 or 1");
  detail::check_argument(z);
  if (z == cplx(0.0)) return order == 0 ? 1.0 : 0.0;
  const CylinderValues v = cylinder_functions(z);
  return order == 0 ? v.j0 : v.j1;
}

/// Bessel function of the second kind, order 0 or 1.
inline cplx bessel_y(int order, cplx z) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_y: order must be 0 or 1");
  const CylinderValues v = cylinder_functions(z);
  return order == 0 ? v.y0 : v.y1;
}

/// Hankel function of the first kind H_nu^(1) = J_nu + i Y_nu, order 0 or 1.
inline cplx hankel1(int order, cplx z) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("hankel1: order must be 0 or 1");
  const CylinderValues v = cylinder_functions(z);
  return order == 0 ? v.h0() : v.h1();
}

inline void check_wavenumber(cplx kappa) {
  if (!std::isfinite(kappa.real()) || !std::isfinite(kappa.imag()))
    throw std::domain_error("wavenumber must be finite");
  if (kappa.imag() == 0.0 && kappa.real() <= 0.0)
    throw std::domain_error("wavenumber must not lie on the non-positive real axis");
}

/// Helmholtz fundamental solution (i/4) H0^(1)(kappa |x - y|).
inline cplx green_function(cplx kappa, Point x, Point y) {
  check_wavenumber(kappa);
  const double r = distance(x, y);
  if (r == 0.0) throw std::invalid_argument("green_function: coincident points");
  return cplx(0.0, 0.25) * hankel1(0, kappa * r);
}

/// Normal derivative of the fundamental solution with respect to y along the
/// unit vector `normal`: (i kappa / 4) H1^(1)(kappa r) (x - y).normal / r.
inline cplx green_normal_derivative(cplx kappa, Point x, Point y, Point normal) {
  check_wavenumber(kappa);
  const double r = distance(x, y);
  if (r == 0.0)
    throw std::invalid_argument("green_normal_derivative: coincident points");
  const double projection = dot(x - y, normal) / r;
  return cplx(0.0, 0.25) * kappa * hankel1(1, kappa * r) * projection;
}

}  // namespace transeig

#endif  // TRANSEIG_SPECIAL_FUNCTIONS_HPP
