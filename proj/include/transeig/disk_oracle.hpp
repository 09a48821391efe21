#ifndef TRANSEIG_DISK_ORACLE_HPP
#define TRANSEIG_DISK_ORACLE_HPP

// Exact transmission eigenvalues of a disk of radius R from the Bessel
// determinant of each angular order m:
//   D_m(k) = k J_m(k sqrt(mu) R) J_m'(k R) - k sqrt(mu) J_m(k R) J_m'(k sqrt(mu) R).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace transeig {

inline constexpr int kMaxOracleOrder = 12;

/// J_m(x) for real x >= 0 and 0 <= m <= 12. Ascending series while x <= m,
/// upward recurrence from J0, J1 beyond that.
inline double bessel_jn_real(int m, double x) {
  if (m < 0 || m > kMaxOracleOrder) throw std::domain_error("bessel order outside 0..12");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel argument must be finite and non-negative");
  if (x <= std::max(m, 1)) {
    const long double half = x / 2.0L;
    long double term = 1.0L;
    for (int k = 1; k <= m; ++k) term *= half / k;
    long double sum = term;
    const long double q = -half * half;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<long double>(k) * (k + m));
      sum += term;
      if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
  }
  double prev = std::cyl_bessel_j(0.0, x);
  if (m == 0) return prev;
  double cur = std::cyl_bessel_j(1.0, x);
  for (int k = 1; k < m; ++k) {
    const double next = 2.0 * k / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// J_m'(x) = J_{m-1}(x) - (m/x) J_m(x), with J_0' = -J_1.
inline double bessel_jn_real_derivative(int m, double x) {
  if (m == 0) return -bessel_jn_real(1, x);
  if (x == 0.0) return m == 1 ? 0.5 : 0.0;
  return bessel_jn_real(m - 1, x) - m / x * bessel_jn_real(m, x);
}

inline double disk_determinant(double kappa, int m, double mu = 16.0, double radius = 0.5) {
  if (!(kappa > 0.0)) throw std::domain_error("kappa must be positive");
  if (!(mu > 1.0) || !(radius > 0.0)) throw std::invalid_argument("need mu > 1 and radius > 0");
  const double s = std::sqrt(mu);
  const double outer = kappa * radius, inner = kappa * s * radius;
  return kappa * bessel_jn_real(m, inner) * bessel_jn_real_derivative(m, outer) -
         kappa * s * bessel_jn_real(m, outer) * bessel_jn_real_derivative(m, inner);
}

struct DiskRoot {
  double kappa;
  int order;
};

/// Sign changes of D_m on a 1e-3 grid for m = 0..m_max, bisected to `tol`.
inline std::vector<DiskRoot> find_roots(int m_max, double a, double b, double tol = 1e-8, double mu = 16.0,
                                        double radius = 0.5, double step = 1e-3) {
  if (!(a > 0.0)) throw std::invalid_argument("interval must start above zero");
  if (m_max < 0 || m_max > kMaxOracleOrder) throw std::domain_error("bessel order outside 0..12");
  std::vector<DiskRoot> roots;
  if (!(a < b)) return roots;
  const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / step - 1e-9)));
  for (int m = 0; m <= m_max; ++m) {
    auto f = [&](double k) { return disk_determinant(k, m, mu, radius); };
    double x0 = a, f0 = f(a);
    for (int c = 1; c <= cells; ++c) {
      const double x1 = (c == cells) ? b : a + (b - a) * c / cells;
      const double f1 = f(x1);
      if (f0 == 0.0) {
        roots.push_back({x0, m});
      } else if (f0 * f1 < 0.0) {
        double lo = x0, hi = x1, flo = f0;
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        roots.push_back({0.5 * (lo + hi), m});
      }
      x0 = x1;
      f0 = f1;
    }
    if (f0 == 0.0) roots.push_back({x0, m});
  }
  std::sort(roots.begin(), roots.end(), [](const DiskRoot& l, const DiskRoot& r) { return l.kappa < r.kappa; });
  std::vector<DiskRoot> unique;
  for (const DiskRoot& r : roots)
    if (unique.empty() || r.kappa - unique.back().kappa > 1e-6) unique.push_back(r);
  return unique;
}

}  // namespace transeig

#endif  // TRANSEIG_DISK_ORACLE_HPP
