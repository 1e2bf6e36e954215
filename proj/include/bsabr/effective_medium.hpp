#pragma once

#include "bsabr/effective_sabr.hpp"
#include "bsabr/types.hpp"

namespace bsabr::effective_medium {

/// Effective-medium reduction of the time-dependent model: with phi(t) =
/// alpha psi(t) and T = tau1, the caplet prices like constant-parameter
/// SABR with
///   alpha_hat = Delta exp(Delta^2 G T / 4),  rho_hat = b / sqrt(c),
///   nu_hat = Delta sqrt(c),
/// where Delta^2 = v(T)/T and b, c, G are the integral combinations below.
/// This module computes them by adaptive quadrature and exists purely as a
/// brute-force cross-check of the closed forms in effective_sabr.hpp.
struct EffectiveMediumIntegrals {
  double v_of_T = 0.0;    // integrated variance v(T) = int_0^T phi^2
  double b = 0.0;         // 2 rho nu / v(T)^2 int (v(T)-v(s)) phi(s) ds
  double c = 0.0;         // 3 nu^2/v(T)^3 int (v(T)-v(s))^2 ds
                          //   + 9/v(T)^3 int w(s)^2 phi(s)^2 ds - 3 b^2
  double delta_sq = 0.0;  // v(T)/T
  double G = 0.0;         // 2 nu^2/v(T)^2 int (v(T)-v(s)) ds - c
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  /// Relative target for each raw integral. The assembled b, c, G divide
  /// the integrals by powers of v(T), which is itself small (~alpha^2 T),
  /// so an absolute-only tolerance leaves them under-resolved whenever
  /// alpha is small; the effective parameters then miss their own targets
  /// even though every integral met abs_tol.
  double rel_tol = 1e-12;
  /// Evaluate the v, w appearing inside the b/c/G integrands by nested
  /// quadrature instead of their closed antiderivatives (slower, maximally
  /// independent).
  bool full_double_quadrature = false;
  /// Initial uniform panels per smooth piece; exposed for the step-halving
  /// self-consistency check.
  int min_panels = 4;
};

/// v(u) = int_0^u phi^2(s) ds by quadrature, phi = alpha psi.
/// Domain: 0 <= u <= tau1.
double v(double u, const SabrParams& p, const AccrualPeriod& period, DecayExponent q,
         const QuadratureOptions& opts = {});

/// w(u) = rho nu int_0^u phi(s) ds by quadrature.
double w(double u, const SabrParams& p, const AccrualPeriod& period, DecayExponent q,
         const QuadratureOptions& opts = {});

EffectiveMediumIntegrals integrals(const SabrParams& p, const AccrualPeriod& period,
                                   DecayExponent q, const QuadratureOptions& opts = {});

/// The full oracle run; valid for tau0 of either sign. Throws
/// std::runtime_error reporting the achieved tolerance if the quadrature
/// error estimate fails to converge within the requested budget.
EffectiveSabrParams effective_params_quadrature(const SabrParams& p,
                                                const AccrualPeriod& period, DecayExponent q,
                                                const QuadratureOptions& opts = {});

}  // namespace bsabr::effective_medium
