#pragma once

#include "bsabr/types.hpp"

namespace bsabr {

/// Constant SABR parameters that reproduce backward-looking caplet prices
/// when plugged into the Hagan formula with expiry `time_to_exercise`
/// (normally tau1). `degenerate` marks the collapsed q -> infinity limit of
/// a fully seasoned period, where the triple is (0, 0, 0) and the
/// alpha_hat > 0 invariant is intentionally relaxed.
struct EffectiveSabrParams {
  double alpha_hat = 0.0;
  double rho_hat = 0.0;
  double nu_hat = 0.0;
  double time_to_exercise = 0.0;
  bool degenerate = false;
};

/// Intermediate quantities of the closed forms, exposed for testing:
/// tau = 2 q tau0 + tau1 and the gamma/H combinations of the tau0 >= 0
/// case, plus the dimensionless zeta of the tau0 <= 0 case
/// (zeta = 3/(4q+3) (1/(2q+1) + rho^2 2q/(3q+2)^2)).
struct Theorem2Intermediates {
  double tau = 0.0;    // years
  double H = 0.0;      // per year
  double gamma = 0.0;  // years^4
  double zeta = 0.0;   // dimensionless
};

Theorem2Intermediates effective_param_intermediates(const SabrParams& p,
                                                    const AccrualPeriod& period,
                                                    DecayExponent q);

/// Seasoned case tau0 <= 0 < tau1:
///   rho_hat   = 2 rho / (sqrt(zeta) (3q+2))
///   nu_hat^2  = nu^2 zeta (2q+1)
///   alpha_hat^2 = alpha^2/(2q+1) (tau1/(tau1-tau0))^{2q}
///                 * exp(1/2 (nu^2/(q+1) - nu_hat^2) tau1)
/// quoted at time_to_exercise tau1. The exponential second-order factor is
/// always on in production; `include_exp_factor = false` exists solely for
/// the Piterbarg comparison.
EffectiveSabrParams effective_params_seasoned(const SabrParams& p, const AccrualPeriod& period,
                                              DecayExponent q, bool include_exp_factor = true);

/// Forward case 0 <= tau0 < tau1, with tau = 2 q tau0 + tau1:
///   gamma     = tau (2 tau^3 + tau1^3 + (4q^2-2q) tau0^3 + 6q tau0^2 tau1)
///               / ((4q+3)(2q+1))
///               + 3 q rho^2 (tau1-tau0)^2 (3 tau^2 - tau1^2 + 5q tau0^2
///               + 4 tau0 tau1) / ((4q+3)(3q+2)^2)
///   rho_hat   = rho (3 tau^2 + 2q tau0^2 + tau1^2) / (sqrt(gamma) (6q+4))
///   nu_hat^2  = nu^2 gamma (2q+1) / (tau^3 tau1)
///   H         = nu^2 (tau^2 + 2q tau0^2 + tau1^2) / (2 tau1 tau (q+1)) - nu_hat^2
///   alpha_hat^2 = alpha^2/(2q+1) (tau/tau1) exp(1/2 H tau1)
/// quoted at time_to_exercise tau1.
EffectiveSabrParams effective_params_forward(const SabrParams& p, const AccrualPeriod& period,
                                             DecayExponent q, bool include_exp_factor = true);

/// Dispatch on the sign of tau0 (tau0 = 0 routes to the forward branch;
/// both branches agree there exactly).
EffectiveSabrParams effective_params(const SabrParams& p, const AccrualPeriod& period,
                                     DecayExponent q);

/// Requote at a different exercise time: alpha_hat and nu_hat scale by
/// sqrt(old_T/new_T), rho_hat is unchanged. Hagan prices are invariant
/// under this transformation.
EffectiveSabrParams rescale_time_to_exercise(const EffectiveSabrParams& e, double new_T);

/// Analytic q -> infinity limit. For tau0 >= 0: (alpha sqrt(tau0/tau1), rho,
/// nu sqrt(tau0/tau1)) at time_to_exercise tau1; the backward caplet then
/// prices like the forward one. For tau0 < 0 the triple collapses to
/// (0, 0, 0), returned with the degenerate flag set.
EffectiveSabrParams limit_q_to_infinity(const SabrParams& p, const AccrualPeriod& period);

/// Analytic q -> 0 limit: the original (alpha, rho, nu) at tau1.
EffectiveSabrParams limit_q_to_zero(const SabrParams& p, const AccrualPeriod& period);

/// The tau0 <= 0 scaling substitution onto the canonical period [0, 1]:
/// alpha -> alpha sqrt(tau1) (tau1/(tau1-tau0))^q, nu -> nu sqrt(tau1);
/// beta, rho, shift unchanged. Test-support operation.
SabrParams scaling_reparameterization(const SabrParams& p, const AccrualPeriod& period,
                                      DecayExponent q);

/// Piterbarg's volatility adjustment for an averaging period,
/// alpha_tilde = alpha sqrt(1 + (tau1-tau0)/(3 tau0)), quoted at exercise
/// time tau0. Requires tau0 > 0. Coincides with the q = 1 closed form
/// (exponential factor off, requoted at tau0).
double piterbarg_alpha(double alpha, const AccrualPeriod& period);

}  // namespace bsabr
