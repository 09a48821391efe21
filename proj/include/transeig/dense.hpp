#ifndef TRANSEIG_DENSE_HPP
#define TRANSEIG_DENSE_HPP

// Dense complex matrices, LU with partial pivoting, and a 1-norm condition
// estimator. Sizes here are a few hundred at most, so everything is a
// straightforward row-major loop nest.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace transeig {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<cplx>& data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Maximum absolute column sum.
  double norm1() const {
    std::vector<double> sums(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) sums[j] += std::abs((*this)(i, j));
    return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (cplx& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  /// Adds s to every diagonal entry.
  ComplexMatrix& add_diagonal(cplx s) {
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) (*this)(i, i) += s;
    return *this;
  }

 private:
  void check_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix conj_transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

inline ComplexVector matvec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  ComplexVector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc = 0.0;
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

inline double norm2(std::span<const cplx> x) {
  double scale = 0.0;
  for (const cplx& v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (const cplx& v : x) sum += std::norm(v / scale);
  return scale * std::sqrt(sum);
}

inline double norm_inf(std::span<const cplx> x) {
  double m = 0.0;
  for (const cplx& v : x) m = std::max(m, std::abs(v));
  return m;
}

/// log|det| and arg det, kept apart so large matrices neither overflow nor
/// underflow.
struct LogDeterminant {
  double log_modulus = 0.0;
  double phase = 0.0;  // in (-pi, pi]
};

/// P A = L U with unit lower L; `pivots[k]` is the row swapped into k.
struct LuFactorization {
  ComplexMatrix factors;
  std::vector<std::size_t> pivots;
  bool singular = false;
  double scale = 0.0;  // max |A_ij|

  std::size_t size() const { return factors.rows(); }
};

inline constexpr double kSingularPivotRatio = 1e-14;

inline LuFactorization lu_factor(ComplexMatrix a) {
  if (!a.square()) throw std::invalid_argument("lu_factor: matrix must be square");
  const std::size_t n = a.rows();
  LuFactorization f;
  f.scale = a.max_abs();
  f.pivots.resize(n);
  const double threshold = kSingularPivotRatio * f.scale;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    f.pivots[k] = p;
    if (p != k) std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(p).begin());
    if (!(best > threshold) || best == 0.0) {
      f.singular = true;
      if (best == 0.0) continue;
    }
    const cplx inv = 1.0 / a(k, k);
    auto pivot_row = a.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto r = a.row(i);
      const cplx l = r[k] * inv;
      r[k] = l;
      if (l == cplx(0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) r[j] -= l * pivot_row[j];
    }
  }
  f.factors = std::move(a);
  return f;
}

namespace detail {

inline void require_solvable(const LuFactorization& f, std::size_t rhs_size) {
  if (f.singular) throw std::domain_error("lu_solve: matrix is singular");
  if (rhs_size != f.size()) throw std::invalid_argument("lu_solve: dimension mismatch");
}

// Solves in place without the singularity check.
inline void lu_solve_unchecked(const LuFactorization& f, std::span<cplx> x) {
  const std::size_t n = f.size();
  const ComplexMatrix& lu = f.factors;
  for (std::size_t k = 0; k < n; ++k)
    if (f.pivots[k] != k) std::swap(x[k], x[f.pivots[k]]);
  for (std::size_t i = 1; i < n; ++i) {
    auto r = lu.row(i);
    cplx acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= r[j] * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto r = lu.row(i);
    cplx acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= r[j] * x[j];
    x[i] = acc / r[i];
  }
}

}  // namespace detail

inline ComplexVector lu_solve(const LuFactorization& f, std::span<const cplx> b) {
  detail::require_solvable(f, b.size());
  ComplexVector x(b.begin(), b.end());
  detail::lu_solve_unchecked(f, x);
  return x;
}

/// Solves A X = B column by column.
inline ComplexMatrix lu_solve(const LuFactorization& f, const ComplexMatrix& b) {
  detail::require_solvable(f, b.rows());
  ComplexMatrix x(b.rows(), b.cols());
  ComplexVector column(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) column[i] = b(i, j);
    detail::lu_solve_unchecked(f, column);
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = column[i];
  }
  return x;
}

/// Solves A^H x = b with the factorization of A.
inline ComplexVector lu_solve_adjoint(const LuFactorization& f, std::span<const cplx> b) {
  detail::require_solvable(f, b.size());
  const std::size_t n = f.size();
  const ComplexMatrix& lu = f.factors;
  ComplexVector x(b.begin(), b.end());
  // A^H = U^H L^H P: solve U^H y = b, then L^H w = y, then x = P^T w.
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= std::conj(lu(j, i)) * x[j];
    x[i] = acc / std::conj(lu(i, i));
  }
  for (std::size_t i = n; i-- > 0;) {
    cplx acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= std::conj(lu(j, i)) * x[j];
    x[i] = acc;
  }
  for (std::size_t k = n; k-- > 0;)
    if (f.pivots[k] != k) std::swap(x[k], x[f.pivots[k]]);
  return x;
}

inline LogDeterminant log_determinant(const LuFactorization& f) {
  LogDeterminant out;
  double phase = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const cplx u = f.factors(k, k);
    if (u == cplx(0.0)) {
      out.log_modulus = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_modulus += std::log(std::abs(u));
    phase += std::arg(u);
    if (f.pivots[k] != k) phase += std::numbers::pi;
  }
  out.phase = std::remainder(phase, 2.0 * std::numbers::pi);
  return out;
}

/// Estimate of ||A||_1 ||A^{-1}||_1 by Hager's 1-norm power iteration
/// (at most 5 steps). Returns +inf for a singular factorization.
inline double condition_estimate(const LuFactorization& f, const ComplexMatrix& a) {
  if (f.singular) return std::numeric_limits<double>::infinity();
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  ComplexVector x(n, cplx(1.0 / static_cast<double>(n)));
  double estimate = 0.0;
  std::size_t last_index = n;
  for (int iter = 0; iter < 5; ++iter) {
    const ComplexVector y = lu_solve(f, x);
    double y_norm1 = 0.0;
    for (const cplx& v : y) y_norm1 += std::abs(v);
    if (iter > 0 && y_norm1 <= estimate) break;
    estimate = y_norm1;
    ComplexVector sign(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(y[i]);
      sign[i] = m > 0.0 ? y[i] / m : cplx(1.0);
    }
    const ComplexVector z = lu_solve_adjoint(f, sign);
    std::size_t j = 0;
    double zmax = 0.0;
    cplx zx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        j = i;
      }
      zx += std::conj(z[i]) * x[i];
    }
    if (zmax <= zx.real() || j == last_index) break;
    std::fill(x.begin(), x.end(), cplx(0.0));
    x[j] = 1.0;
    last_index = j;
  }
  // Higham's alternating test vector guards against unlucky start vectors.
  ComplexVector alt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    alt[i] = sgn * (1.0 + static_cast<double>(i) / std::max<std::size_t>(n - 1, 1));
  }
  const ComplexVector y = lu_solve(f, alt);
  double alt_estimate = 0.0;
  for (const cplx& v : y) alt_estimate += std::abs(v);
  alt_estimate *= 2.0 / (3.0 * static_cast<double>(n));
  estimate = std::max(estimate, alt_estimate);
  return estimate * a.norm1();
}

}  // namespace transeig

#endif  // TRANSEIG_DENSE_HPP
