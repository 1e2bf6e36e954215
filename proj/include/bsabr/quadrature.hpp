#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace bsabr {

/// 15-point Gauss-Legendre rule on [-1, 1]; nodes and weights computed once
/// at startup by Newton iteration on the Legendre recurrence (machine
/// precision, no hard-coded tables).
class GaussLegendre15 {
 public:
  static const GaussLegendre15& instance();

  template <typename F>
  double apply(const F& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_points; ++i)
      acc += weight_[i] * f(mid + half * node_[i]);
    return half * acc;
  }

 private:
  GaussLegendre15();
  static constexpr std::size_t n_points = 15;
  std::array<double, n_points> node_{};
  std::array<double, n_points> weight_{};
};

namespace detail {

template <typename F>
double adapt(const F& f, double a, double b, double tol, int depth, double* err_acc) {
  const auto& rule = GaussLegendre15::instance();
  const double whole = rule.apply(f, a, b);
  const double mid = 0.5 * (a + b);
  const double halves = rule.apply(f, a, mid) + rule.apply(f, mid, b);
  const double err = std::abs(whole - halves);
  if (err <= tol || depth >= 44) {
    if (err_acc) *err_acc += err;
    return halves;
  }
  return adapt(f, a, mid, 0.5 * tol, depth + 1, err_acc)
       + adapt(f, mid, b, 0.5 * tol, depth + 1, err_acc);
}

}  // namespace detail

/// Adaptive integral of f over [a, b] to absolute tolerance abs_tol.
/// `breakpoints` are known non-smooth interior points (integration never
/// straddles one); `min_panels` forces an initial uniform subdivision of
/// each smooth piece, which doubles as the step-halving self-check knob.
/// If `err_estimate` is non-null it accumulates the accepted local error
/// estimates (an upper-bound style figure, not a guarantee).
/// A positive `rel_tol` adds a second pass whose absolute budget is
/// rel_tol * |first-pass value|: callers that rescale a small integral by a
/// large prefactor need the error controlled relative to the integral
/// itself, which no fixed absolute tolerance can deliver across scales.
/// Keep rel_tol well above machine epsilon (~1e-13 or looser), otherwise
/// the refinement chases roundoff.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol,
                 const std::vector<double>& breakpoints = {}, int min_panels = 1,
                 double* err_estimate = nullptr, double rel_tol = 0.0) {
  if (a == b) return 0.0;
  if (rel_tol > 0.0) {
    const double rough = integrate(f, a, b, abs_tol, breakpoints, min_panels);
    if (rough != 0.0) abs_tol = std::min(abs_tol, rel_tol * std::abs(rough));
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double piece_tol = abs_tol * (hi - lo) / (b - a);
    for (int p = 0; p < min_panels; ++p) {
      const double pa = lo + (hi - lo) * p / min_panels;
      const double pb = lo + (hi - lo) * (p + 1) / min_panels;
      total += detail::adapt(f, pa, pb, piece_tol / min_panels, 0, err_estimate);
    }
  }
  return total;
}

}  // namespace bsabr
