#include "bsabr/black76.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsabr {

namespace {
constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double inv_sqrt2pi = 0.39894228040143267794;
constexpr double sigma_lo = 1e-8;
constexpr double sigma_hi = 10.0;
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * inv_sqrt2); }

double black_price(const BlackQuote& q) {
  if (!(q.expiry > 0.0)) throw std::domain_error("black_price: expiry <= 0");
  if (!(q.sigma > 0.0)) throw std::domain_error("black_price: sigma <= 0");
  if (!(q.strike > 0.0)) throw std::domain_error("black_price: strike <= 0");
  if (!(q.forward > 0.0)) throw std::domain_error("black_price: forward <= 0");
  const double x = std::log(q.forward / q.strike);
  const double sq = q.sigma * std::sqrt(q.expiry);
  const double dp = x / sq + 0.5 * sq;
  const double dm = dp - sq;
  return q.forward * norm_cdf(dp) - q.strike * norm_cdf(dm);
}

double black_vega(double expiry, double strike, double forward, double sigma) {
  const double x = std::log(forward / strike);
  const double sq = sigma * std::sqrt(expiry);
  const double dp = x / sq + 0.5 * sq;
  return forward * std::sqrt(expiry) * inv_sqrt2pi * std::exp(-0.5 * dp * dp);
}

double implied_vol(double expiry, double strike, double forward, double price) {
  if (!(expiry > 0.0)) throw std::domain_error("implied_vol: expiry <= 0");
  if (!(strike > 0.0) || !(forward > 0.0))
    throw std::domain_error("implied_vol: nonpositive strike/forward");
  const double intrinsic = std::max(forward - strike, 0.0);
  if (!(price > intrinsic) || !(price < forward))
    throw std::domain_error("implied_vol: price outside the open no-arbitrage bracket");

  // Safeguarded Newton: keep a sign-changing bracket [lo, hi], fall back to
  // bisection whenever the Newton step leaves it. Convergence is judged in
  // vol space, not price space: an absolute price tolerance would stop far
  // too early for small out-of-the-money prices, whose vol is still sharply
  // determined. Those are additionally solved on log(price), where Newton
  // stays well-conditioned.
  const bool log_space = price < 1e-4 * forward;
  const double log_price = std::log(price);
  double lo = sigma_lo, hi = sigma_hi;
  double sigma = std::clamp(price / (0.4 * forward * std::sqrt(expiry)), 0.05, 2.0);

  for (int it = 0; it < 200; ++it) {
    const double val = black_price({expiry, strike, forward, sigma});
    const double diff = val - price;
    if (diff == 0.0) return sigma;
    (diff > 0.0 ? hi : lo) = sigma;
    const double vega = black_vega(expiry, strike, forward, sigma);
    double next;
    if (vega > 0.0 && val > 0.0) {
      next = log_space ? sigma - (std::log(val) - log_price) * val / vega
                       : sigma - diff / vega;
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - sigma) <= 1e-14 * sigma) return next;
    sigma = next;
    if (hi - lo <= 1e-14 * lo) return sigma;
  }
  return sigma;
}

}  // namespace bsabr
