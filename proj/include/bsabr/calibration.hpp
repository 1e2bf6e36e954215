#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bsabr/types.hpp"

namespace bsabr {

enum class QuoteKind { implied_vol, pv };

struct Quote {
  double strike = 0.0;
  CapletStyle style = CapletStyle::forward;
  QuoteKind kind = QuoteKind::implied_vol;
  double value = 0.0;
  double weight = 1.0;
};

struct QuoteSet {
  std::vector<Quote> entries;
  AccrualPeriod period;
  double forward_rate = 0.0;
  double discount = 1.0;
};

struct CalibrationResult {
  SabrParams params;      ///< fitted (alpha, rho, nu); beta/shift as supplied
  double q = 0.0;         ///< fitted decay exponent (q calibration only)
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool q_capped = false;  ///< q calibration hit the upper search bound
  std::vector<double> residuals;  ///< per-quote, vol space (price space for the q fit)
};

/// Thrown when a target quote lies outside the attainable price range; the
/// bounds are carried for reporting (an inconsistent backward/forward quote
/// pair shows up here).
struct BracketError : std::runtime_error {
  BracketError(const std::string& msg, double lo, double hi)
      : std::runtime_error(msg), attainable_lo(lo), attainable_hi(hi) {}
  double attainable_lo;
  double attainable_hi;
};

struct FitOptions {
  bool fit_alpha = true;
  bool fit_rho = true;
  bool fit_nu = true;
};

/// Weighted least-squares fit of (alpha, rho, nu) to forward-looking quotes
/// (implied-vol residuals; PV quotes are inverted once at ingestion), with
/// beta held fixed at initial.beta. Derivative-free simplex search over
/// (log alpha, atanh-style rho with |rho| <= 0.999, log nu).
/// Requires tau0 > 0 and at least 3 forward-looking entries (fewer are
/// accepted when coordinates are frozen via `opts`).
CalibrationResult calibrate_forward_smile(const QuoteSet& quotes, const SabrParams& initial,
                                          const FitOptions& opts = {});

/// Root-finds q in [1e-3, 1e3] so the backward-looking ATM PV matches the
/// quote, exploiting that the price is monotonically nonincreasing in q
/// (verified on the bracket first). A quote at or below the q -> infinity
/// price but at/above the analytic limit reports q_capped; one outside the
/// attainable range throws BracketError.
CalibrationResult calibrate_q_to_atm_backward(const Quote& atm_quote, const SabrParams& p,
                                              const AccrualPeriod& period,
                                              double forward_rate, double discount);

}  // namespace bsabr
