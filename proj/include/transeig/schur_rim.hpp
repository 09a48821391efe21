#ifndef TRANSEIG_SCHUR_RIM_HPP
#define TRANSEIG_SCHUR_RIM_HPP

// Regularized Schur complement of the inner single layer and the
// recursive-integral-method (RIM) indicator built on it.
//
//   A^eta(k) = (I/2 + D_k) - S_k (eta I + S_k1^H S_k1)^{-1} S_k1^H (I/2 + D_k1)
//
// with k1 = k sqrt(mu); eta = 0 is the plain Schur complement solved by LU.
// The indicator tests whether A^eta(k) has an eigenvalue inside the circle
// |z| = r by applying the trapezoid approximation P_m of the Riesz projection
// twice to a random probe.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "transeig/dense.hpp"
#include "transeig/geometry.hpp"
#include "transeig/nystrom.hpp"

namespace transeig {

inline constexpr double kAutoConditionThreshold = 1e8;
inline constexpr double kAutoEta = 1e-5;
inline constexpr double kDetectionThreshold = 0.5;

/// eta = 0 with a singular inner single layer.
class RegularizationRequired : public std::runtime_error {
 public:
  explicit RegularizationRequired(double condition)
      : std::runtime_error(message(condition)), condition_(condition) {}
  double condition_estimate() const { return condition_; }

 private:
  static std::string message(double condition) {
    std::ostringstream os;
    os << "regularization required: inner single layer is singular (condition estimate " << condition << ")";
    return os.str();
  }
  double condition_;
};

/// A resolvent system on the contour is singular.
class ContourHit : public std::runtime_error {
 public:
  ContourHit()
      : std::runtime_error("eigenvalue on the integration contour; perturb the contour radius") {}
};

/// Either a fixed eta or automatic selection from the condition of S_k1.
struct Regularization {
  bool automatic = true;
  double eta = 0.0;

  static Regularization automatic_choice() { return {true, 0.0}; }
  static Regularization fixed(double eta) {
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
    return {false, eta};
  }
};

struct SchurOperator {
  ComplexMatrix matrix;
  cplx wavenumber;
  double eta = 0.0;
  bool regularized_path_taken = false;
  double condition_estimate = 0.0;  // of S_{k1,n}
};

/// Schur complement from already assembled outer (k) and inner (k1) layers.
inline SchurOperator schur_from_layers(const LayerOperators& outer, const LayerOperators& inner,
                                       Regularization reg) {
  const LuFactorization inner_lu = lu_factor(inner.single_layer);
  const double condition = condition_estimate(inner_lu, inner.single_layer);

  double eta = reg.eta;
  if (reg.automatic) eta = (condition > kAutoConditionThreshold) ? kAutoEta : 0.0;

  ComplexMatrix inner_trace = inner.double_layer;
  inner_trace.add_diagonal(0.5);

  ComplexMatrix eliminated;
  if (eta == 0.0) {
    if (inner_lu.singular) throw RegularizationRequired(condition);
    eliminated = lu_solve(inner_lu, inner_trace);
  } else {
    const ComplexMatrix adjoint = conj_transpose(inner.single_layer);
    ComplexMatrix normal = matmul(adjoint, inner.single_layer);
    normal.add_diagonal(eta);
    const LuFactorization normal_lu = lu_factor(std::move(normal));
    if (normal_lu.singular) throw std::domain_error("regularized normal equations are singular");
    eliminated = lu_solve(normal_lu, matmul(adjoint, inner_trace));
  }

  ComplexMatrix a = outer.double_layer;
  a.add_diagonal(0.5);
  a -= matmul(outer.single_layer, eliminated);
  return {std::move(a), outer.wavenumber, eta, eta > 0.0, condition};
}

inline SchurOperator schur_operator(cplx kappa, double mu, Regularization reg, const Mesh& mesh) {
  if (!(mu > 1.0)) throw std::invalid_argument("refractive index mu must exceed 1");
  const LayerOperators outer = layer_operators(kappa, mesh);
  const LayerOperators inner = layer_operators(kappa * std::sqrt(mu), mesh);
  return schur_from_layers(outer, inner, reg);
}

inline SchurOperator schur_operator(cplx kappa, double mu, double eta, const Mesh& mesh) {
  return schur_operator(kappa, mu, Regularization::fixed(eta), mesh);
}

struct RimConfig {
  int m = 64;             // 2m contour nodes
  double radius = 1e-3;   // contour radius r
  std::uint64_t seed = 0; // probe seed

  void validate() const {
    if (m < 1) throw std::invalid_argument("rim: m must be positive");
    if (!(radius > 0.0 && radius <= 0.05)) throw std::invalid_argument("rim: radius must lie in (0, 0.05]");
  }
};

/// Complex standard normal probe, a pure function of (seed, index).
inline ComplexVector probe_vector(std::size_t size, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector f(size);
  for (cplx& v : f) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = cplx(re, im);
  }
  return f;
}

namespace detail {

// Unitary reduction Q^H A Q = H to upper Hessenberg form by Householder
// reflections.
struct HessenbergForm {
  ComplexMatrix h;
  ComplexMatrix q;
};

inline HessenbergForm hessenberg(ComplexMatrix a) {
  const std::size_t n = a.rows();
  ComplexMatrix q = ComplexMatrix::identity(n);
  ComplexVector v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm_x = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm_x = std::hypot(norm_x, std::abs(a(i, k)));
    if (norm_x == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx alpha = -(std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0)) * norm_x;
    std::fill(v.begin(), v.end(), cplx(0.0));
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double norm_v = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm_v = std::hypot(norm_v, std::abs(v[i]));
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= norm_v;

    // a <- (I - 2 v v^H) a
    std::fill(w.begin(), w.end(), cplx(0.0));
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx vi = std::conj(v[i]);
      auto row = a.row(i);
      for (std::size_t j = k; j < n; ++j) w[j] += vi * row[j];
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx vi = 2.0 * v[i];
      auto row = a.row(i);
      for (std::size_t j = k; j < n; ++j) row[j] -= vi * w[j];
    }
    // a <- a (I - 2 v v^H), q <- q (I - 2 v v^H)
    for (ComplexMatrix* m : {&a, &q}) {
      for (std::size_t i = 0; i < n; ++i) {
        auto row = m->row(i);
        cplx dotv = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) dotv += row[j] * v[j];
        dotv *= 2.0;
        for (std::size_t j = k + 1; j < n; ++j) row[j] -= dotv * std::conj(v[j]);
      }
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return {std::move(a), std::move(q)};
}

// Solves (z I - H) x = b in place for upper Hessenberg H by Gaussian
// elimination with adjacent-row pivoting. Returns false if a pivot falls
// below the singularity threshold.
inline bool shifted_hessenberg_solve(const ComplexMatrix& h, cplx z, ComplexMatrix& work, std::span<cplx> b) {
  const std::size_t n = h.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = (i == 0 ? 0 : i - 1); j < n; ++j) {
      work(i, j) = (i == j ? z : cplx(0.0)) - h(i, j);
      scale = std::max(scale, std::abs(work(i, j)));
    }
  }
  const double threshold = kSingularPivotRatio * scale;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (std::abs(work(k + 1, k)) > std::abs(work(k, k))) {
      for (std::size_t j = k; j < n; ++j) std::swap(work(k, j), work(k + 1, j));
      std::swap(b[k], b[k + 1]);
    }
    if (!(std::abs(work(k, k)) > threshold)) return false;
    const cplx l = work(k + 1, k) / work(k, k);
    auto pivot = work.row(k);
    auto next = work.row(k + 1);
    for (std::size_t j = k + 1; j < n; ++j) next[j] -= l * pivot[j];
    b[k + 1] -= l * b[k];
  }
  if (!(std::abs(work(n - 1, n - 1)) > threshold)) return false;
  for (std::size_t i = n; i-- > 0;) {
    auto row = work.row(i);
    cplx acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= row[j] * b[j];
    b[i] = acc / row[i];
  }
  return true;
}

}  // namespace detail

/// Resolvent of A on the nodes z_j = r exp(i pi j / m), j = 0..2m-1.
/// A is reduced once to Hessenberg form, after which each shifted solve
/// costs O(size^2).
class ContourResolvent {
 public:
  ContourResolvent(const ComplexMatrix& a, const RimConfig& cfg) {
    cfg.validate();
    if (!a.square()) throw std::invalid_argument("rim: operator must be square");
    if (a.rows() == 0) throw std::invalid_argument("rim: empty operator");
    form_ = detail::hessenberg(a);
    const int count = 2 * cfg.m;
    nodes_.reserve(count);
    for (int j = 0; j < count; ++j) nodes_.push_back(std::polar(cfg.radius, std::numbers::pi * j / cfg.m));
    ComplexMatrix work(size(), size());
    ComplexVector probe(size(), 1.0);
    for (const cplx z : nodes_) {
      std::fill(probe.begin(), probe.end(), cplx(1.0));
      if (!detail::shifted_hessenberg_solve(form_.h, z, work, probe)) throw ContourHit();
    }
  }

  std::size_t size() const { return form_.h.rows(); }

  /// P_m f = (1/2m) sum_j z_j (z_j I - A)^{-1} f.
  ComplexVector project(std::span<const cplx> f) const {
    if (f.size() != size()) throw std::invalid_argument("rim: probe dimension mismatch");
    const std::size_t n = size();
    // Work in the Hessenberg basis: g = Q^H f.
    ComplexVector g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = form_.q.row(i);
      for (std::size_t j = 0; j < n; ++j) g[j] += std::conj(row[j]) * f[i];
    }
    ComplexVector acc(n, 0.0), x(n);
    ComplexMatrix work(n, n);
    for (const cplx z : nodes_) {
      std::copy(g.begin(), g.end(), x.begin());
      if (!detail::shifted_hessenberg_solve(form_.h, z, work, x)) throw ContourHit();
      for (std::size_t i = 0; i < n; ++i) acc[i] += z * x[i];
    }
    const double scale = 1.0 / static_cast<double>(nodes_.size());
    ComplexVector out = matvec(form_.q, acc);
    for (cplx& v : out) v *= scale;
    return out;
  }

 private:
  detail::HessenbergForm form_;
  std::vector<cplx> nodes_;
};

inline ComplexVector spectral_projection_apply(const ComplexMatrix& a, const RimConfig& cfg,
                                               std::span<const cplx> f) {
  return ContourResolvent(a, cfg).project(f);
}

inline ComplexVector spectral_projection_apply(const SchurOperator& a, const RimConfig& cfg,
                                               std::span<const cplx> f) {
  return spectral_projection_apply(a.matrix, cfg, f);
}

/// ||P_m g||, g = P_m f / ||P_m f||; zero when P_m f underflows.
inline double rim_indicator(const ComplexMatrix& a, const RimConfig& cfg, std::uint64_t probe_index = 0) {
  const ContourResolvent resolvent(a, cfg);
  const ComplexVector f = probe_vector(a.rows(), cfg.seed, probe_index);
  ComplexVector p = resolvent.project(f);
  const double p_norm = norm2(p);
  if (!(p_norm > 1e-300)) return 0.0;
  for (cplx& v : p) v /= p_norm;
  return norm2(resolvent.project(p));
}

inline double rim_indicator(const SchurOperator& a, const RimConfig& cfg, std::uint64_t probe_index = 0) {
  return rim_indicator(a.matrix, cfg, probe_index);
}

}  // namespace transeig

#endif  // TRANSEIG_SCHUR_RIM_HPP
