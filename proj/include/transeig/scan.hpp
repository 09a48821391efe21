#ifndef TRANSEIG_SCAN_HPP
#define TRANSEIG_SCAN_HPP

// Wavenumber scans over real intervals and complex rectangles.
//
// Every grid point gets a RIM indicator sample. The indicator is ~1 only
// while an eigenvalue of A(k) sits inside |z| < r, which on a real interval
// is a window of width about 2r / |d lambda / dk| (~3e-4 for the disk at
// r = 1e-3), far narrower than practical grid steps. Detection therefore
// localizes candidates first and lets the indicator decide:
//  - candidates are grid-local minima of log|det A(k)|;
//  - on real intervals the minimum is refined by golden-section search on
//    log|det A|, on complex grids by Muller iteration on det A;
//  - a candidate is reported only if the indicator at the refined k is at
//    least the detection threshold.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "transeig/dense.hpp"
#include "transeig/geometry.hpp"
#include "transeig/nystrom.hpp"
#include "transeig/parallel.hpp"
#include "transeig/schur_rim.hpp"

namespace transeig {

struct ScanOptions {
  double mu = 16.0;
  Regularization regularization = Regularization::automatic_choice();
  RimConfig rim;
  unsigned workers = 1;
  double detection_threshold = kDetectionThreshold;
};

struct ScanSample {
  cplx kappa;
  double indicator = std::numeric_limits<double>::quiet_NaN();
  double eta_used = std::numeric_limits<double>::quiet_NaN();
  double condition_estimate = std::numeric_limits<double>::quiet_NaN();
  LogDeterminant determinant;  // of A(kappa)
  std::string error;           // empty on success

  bool ok() const { return error.empty(); }
};

struct Detection {
  cplx kappa;
  double indicator = 0.0;
};

struct ScanResult {
  std::vector<ScanSample> samples;
  std::vector<Detection> detected;
};

struct ComplexWindow {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  int re_cells = 1, im_cells = 1;

  void validate() const {
    if (!(re_min < re_max) || !(im_min < im_max)) throw std::invalid_argument("window: empty range");
    if (re_cells < 1 || im_cells < 1) throw std::invalid_argument("window: need at least one cell per axis");
  }
  std::size_t points() const { return std::size_t(re_cells + 1) * std::size_t(im_cells + 1); }
  /// Grid order: real index outer, imaginary index inner.
  cplx at(int ir, int ii) const {
    return {re_min + (re_max - re_min) * ir / re_cells, im_min + (im_max - im_min) * ii / im_cells};
  }
  bool contains(cplx k, double tol = 1e-12) const {
    return k.real() >= re_min - tol && k.real() <= re_max + tol && k.imag() >= im_min - tol &&
           k.imag() <= im_max + tol;
  }
};

/// Everything the scan computes at one wavenumber.
inline ScanSample evaluate_point(cplx kappa, const Mesh& mesh, const ScanOptions& options,
                                 std::uint64_t probe_index) {
  ScanSample sample;
  sample.kappa = kappa;
  try {
    const SchurOperator a = schur_operator(kappa, options.mu, options.regularization, mesh);
    sample.eta_used = a.eta;
    sample.condition_estimate = a.condition_estimate;
    sample.determinant = log_determinant(lu_factor(a.matrix));
    sample.indicator = rim_indicator(a, options.rim, probe_index);
  } catch (const RegularizationRequired& e) {
    sample.condition_estimate = e.condition_estimate();
    sample.error = e.what();
  } catch (const std::exception& e) {
    sample.error = e.what();
  }
  return sample;
}

namespace detail {

inline LogDeterminant schur_log_det(cplx kappa, const Mesh& mesh, double mu, double eta) {
  try {
    const SchurOperator a = schur_operator(kappa, mu, Regularization::fixed(eta), mesh);
    return log_determinant(lu_factor(a.matrix));
  } catch (const std::exception&) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
}

inline double indicator_at(cplx kappa, const Mesh& mesh, const ScanOptions& options, double eta,
                           std::uint64_t probe_index) {
  try {
    const SchurOperator a = schur_operator(kappa, options.mu, Regularization::fixed(eta), mesh);
    return rim_indicator(a, options.rim, probe_index);
  } catch (const std::exception&) {
    return 0.0;
  }
}

// Golden-section minimization of log|det A| on [lo, hi].
inline double golden_minimize(double lo, double hi, const Mesh& mesh, double mu, double eta) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double k) { return schur_log_det(k, mesh, mu, eta).log_modulus; };
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 100 && (hi - lo) > 1e-10 * std::max(1.0, std::abs(hi)); ++iter) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Muller iteration for a zero of det A near `start`; values are scaled by
// the determinant at `start` to stay in range.
inline std::optional<cplx> muller_root(cplx start, cplx step_a, cplx step_b, const Mesh& mesh, double mu,
                                       double eta) {
  const LogDeterminant ref = schur_log_det(start, mesh, mu, eta);
  if (!std::isfinite(ref.log_modulus)) return std::nullopt;
  auto f = [&](cplx k) -> cplx {
    const LogDeterminant d = schur_log_det(k, mesh, mu, eta);
    if (!std::isfinite(d.log_modulus)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    const double scale = d.log_modulus - ref.log_modulus;
    if (scale > 600.0) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    return std::polar(std::exp(scale), d.phase - ref.phase);
  };
  cplx x0 = start + step_a, x1 = start + step_b, x2 = start;
  cplx y0 = f(x0), y1 = f(x1), y2 = f(x2);
  for (int iter = 0; iter < 60; ++iter) {
    if (!std::isfinite(std::abs(y0)) || !std::isfinite(std::abs(y1)) || !std::isfinite(std::abs(y2)))
      return std::nullopt;
    if (y2 == cplx(0.0)) return x2;
    const cplx h1 = x1 - x0, h2 = x2 - x1;
    const cplx d1 = (y1 - y0) / h1, d2 = (y2 - y1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * y2);
    const cplx den = std::abs(b + disc) > std::abs(b - disc) ? b + disc : b - disc;
    if (den == cplx(0.0)) return std::nullopt;
    const cplx x3 = x2 - 2.0 * y2 / den;
    x0 = x1;
    y0 = y1;
    x1 = x2;
    y1 = y2;
    x2 = x3;
    y2 = f(x3);
    if (std::abs(x2 - x1) <= 1e-12 * std::max(1.0, std::abs(x2))) return x2;
  }
  return std::nullopt;
}

inline void add_detection(std::vector<Detection>& out, Detection d) {
  for (Detection& existing : out) {
    if (std::abs(existing.kappa - d.kappa) < 1e-6) {
      if (d.indicator > existing.indicator) existing = d;
      return;
    }
  }
  out.push_back(d);
}

inline void sort_detections(std::vector<Detection>& out) {
  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.kappa.real() != b.kappa.real()) return a.kappa.real() < b.kappa.real();
    return a.kappa.imag() < b.kappa.imag();
  });
}

}  // namespace detail

/// Indicator on the N+1 points a + (b-a) k / N plus refined detections.
inline ScanResult scan_interval(double a, double b, int cells, const Mesh& mesh, const ScanOptions& options) {
  if (!(a > 0.0 && a < b)) throw std::invalid_argument("scan: need 0 < a < b");
  if (cells < 1) throw std::invalid_argument("scan: need at least one subinterval");
  options.rim.validate();

  ScanResult result;
  const std::size_t count = static_cast<std::size_t>(cells) + 1;
  auto grid = [&](std::size_t k) { return a + (b - a) * static_cast<double>(k) / cells; };
  result.samples = parallel_map(count, options.workers,
                                [&](std::size_t k) { return evaluate_point(grid(k), mesh, options, k); });

  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < count; ++k) {
    const ScanSample& s = result.samples[k];
    if (!s.ok()) continue;
    bool is_min = true;
    int neighbours = 0;
    for (std::size_t nb : {k - 1, k + 1}) {
      if (nb >= count || !result.samples[nb].ok()) continue;
      ++neighbours;
      if (result.samples[nb].determinant.log_modulus <= s.determinant.log_modulus) is_min = false;
    }
    if (is_min && neighbours > 0) candidates.push_back(k);
  }

  const auto refined = parallel_map(candidates.size(), options.workers, [&](std::size_t c) {
    const std::size_t k = candidates[c];
    const double lo = grid(k == 0 ? 0 : k - 1);
    const double hi = grid(std::min(k + 1, count - 1));
    const double eta = result.samples[k].eta_used;
    const double kappa = detail::golden_minimize(lo, hi, mesh, options.mu, eta);
    return Detection{kappa, detail::indicator_at(kappa, mesh, options, eta, k)};
  });
  for (const Detection& d : refined)
    if (d.indicator >= options.detection_threshold) detail::add_detection(result.detected, d);
  detail::sort_detections(result.detected);
  return result;
}

/// Indicator on the tensor grid of `window` plus refined detections.
inline ScanResult scan_complex_grid(const ComplexWindow& window, const Mesh& mesh, const ScanOptions& options) {
  window.validate();
  if (window.re_min <= 0.0 && window.im_min <= 0.0 && window.im_max >= 0.0)
    throw std::invalid_argument("window must avoid the non-positive real axis");
  options.rim.validate();

  const int n_im = window.im_cells + 1;
  const std::size_t count = window.points();
  auto point = [&](std::size_t k) { return window.at(static_cast<int>(k) / n_im, static_cast<int>(k) % n_im); };

  ScanResult result;
  result.samples = parallel_map(count, options.workers,
                                [&](std::size_t k) { return evaluate_point(point(k), mesh, options, k); });

  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < count; ++k) {
    const ScanSample& s = result.samples[k];
    if (!s.ok()) continue;
    const int ir = static_cast<int>(k) / n_im, ii = static_cast<int>(k) % n_im;
    bool is_min = true;
    int neighbours = 0;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int di = -1; di <= 1; ++di) {
        if (dr == 0 && di == 0) continue;
        const int r = ir + dr, i = ii + di;
        if (r < 0 || r > window.re_cells || i < 0 || i >= n_im) continue;
        const ScanSample& nb = result.samples[static_cast<std::size_t>(r) * n_im + i];
        if (!nb.ok()) continue;
        ++neighbours;
        if (nb.determinant.log_modulus <= s.determinant.log_modulus) is_min = false;
      }
    }
    if (is_min && neighbours > 0) candidates.push_back(k);
  }

  const cplx step_re((window.re_max - window.re_min) / window.re_cells, 0.0);
  const cplx step_im(0.0, (window.im_max - window.im_min) / window.im_cells);
  const auto refined = parallel_map(candidates.size(), options.workers, [&](std::size_t c) -> std::optional<Detection> {
    const std::size_t k = candidates[c];
    const double eta = result.samples[k].eta_used;
    const auto root = detail::muller_root(point(k), step_re, step_im, mesh, options.mu, eta);
    if (!root || !window.contains(*root)) return std::nullopt;
    return Detection{*root, detail::indicator_at(*root, mesh, options, eta, k)};
  });
  for (const auto& d : refined)
    if (d && d->indicator >= options.detection_threshold) detail::add_detection(result.detected, *d);
  detail::sort_detections(result.detected);
  return result;
}

}  // namespace transeig

#endif  // TRANSEIG_SCAN_HPP
