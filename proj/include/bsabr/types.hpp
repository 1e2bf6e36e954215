#pragma once

#include <string>
#include <vector>

namespace bsabr {

/// SABR parameter set for the backward-looking model
///
///   dR(t)     = psi(t) sigma(t) (R(t)+shift)^beta dB(t),   R(0) given
///   dsigma(t) = nu sigma(t) dW(t),                         sigma(0) = alpha
///   d<B,W>(t) = rho dt
///
/// with psi the volatility-decay function below. All times are year
/// fractions from the pricing date; rates and vols are decimals per year
/// (per sqrt-year for vols). The displacement `shift` enters only through
/// the substitution R -> R+shift, K -> K+shift in the Black/Hagan layer.
struct SabrParams {
  double alpha = 0.0;  ///< initial volatility sigma(0), > 0
  double beta = 1.0;   ///< CEV exponent in [0, 1]
  double rho = 0.0;    ///< spot-vol correlation in [-1, 1]
  double nu = 0.0;     ///< vol-of-vol, >= 0
  double shift = 0.0;  ///< displacement, >= 0 (default: none)
};

/// Accrual period [tau0, tau1] of the compounded rate. tau0 may be negative
/// (period already seasoned); tau1 must lie in the future.
struct AccrualPeriod {
  double tau0 = 0.0;
  double tau1 = 0.0;
};

/// Volatility decay speed. Strictly positive; the q -> 0 and q -> infinity
/// endpoints are exposed as analytic limit operations in effective_sabr.hpp,
/// not by passing extreme values here.
struct DecayExponent {
  double q = 1.0;
};

enum class CapletStyle { backward, forward };

/// One caplet on the accrual period: backward-looking (payoff fixed by the
/// compounded rate at tau1) or forward-looking (fixed at tau0, paid at tau1).
/// For a seasoned forward-looking caplet (tau0 <= 0) `forward_rate` carries
/// the already-realized fixing R(tau0).
struct CapletSpec {
  double strike = 0.0;
  CapletStyle style = CapletStyle::backward;
  AccrualPeriod period;
  double discount = 1.0;      ///< P(0, tau1), in (0, 1]
  double forward_rate = 0.0;  ///< R(0), > -shift
};

/// Decay factor psi(t) = min(1, (tau1 - t)/(tau1 - tau0))^q.
/// Equals 1 for t <= tau0, decreases to 0 at t = tau1.
/// Throws std::domain_error for t > tau1.
double psi(double t, const AccrualPeriod& period, DecayExponent q);

/// Collects every violated invariant of (params, spec); empty means ok.
/// Violations are data, not failures: nothing throws here.
std::vector<std::string> validate(const SabrParams& params, const CapletSpec& spec);

}  // namespace bsabr
