#pragma once

namespace bsabr {

/// Inputs of the undiscounted Black-76 call formula
///   pi(T, K, R, sigma) = R Phi(d+) - K Phi(d-),
///   d+- = (x +- sigma^2 T / 2) / (sigma sqrt(T)),  x = log(R / K).
/// R and K are post-shift values; discounting is applied by the caller.
struct BlackQuote {
  double expiry = 0.0;   ///< T, years, > 0
  double strike = 0.0;   ///< K, > 0
  double forward = 0.0;  ///< R, > 0
  double sigma = 0.0;    ///< implied vol, > 0
};

/// Standard normal CDF, absolute accuracy better than 1e-15.
double norm_cdf(double x);

/// Undiscounted Black-76 call value, in (max(R-K, 0), R).
/// Throws std::domain_error on nonpositive T, sigma, K or R.
double black_price(const BlackQuote& quote);

/// dPi/dsigma = R sqrt(T) phi(d+), used by the implied-vol solver and by
/// standard-error conversion of Monte-Carlo prices.
double black_vega(double expiry, double strike, double forward, double sigma);

/// Inverts black_price in sigma. `price` must lie strictly inside the
/// no-arbitrage bracket (max(R-K,0), R); anything else -- including prices
/// produced by Monte-Carlo noise -- throws std::domain_error. The result
/// satisfies |black_price(sigma) - price| <= 1e-12 * R.
double implied_vol(double expiry, double strike, double forward, double price);

}  // namespace bsabr
