#include "bsabr/black76.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace bsabr;

TEST_CASE("norm_cdf basics") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(1.0) + norm_cdf(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm_cdf(10.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm_cdf(-40.0) >= 0.0);
}

TEST_CASE("ATM price, frozen value") {
  // R (2 Phi(sigma sqrt(T)/2) - 1) at R=K=0.05, sigma=0.2, T=1
  CHECK(black_price({1.0, 0.05, 0.05, 0.2})
        == doctest::Approx(0.0039827837277029).epsilon(1e-12));
}

TEST_CASE("put-call parity surrogate on a grid") {
  for (const double t : {0.1, 1.0, 5.0})
    for (const double k : {0.02, 0.05, 0.09})
      for (const double sigma : {0.05, 0.3, 1.0}) {
        const double r = 0.05;
        const double call = black_price({t, k, r, sigma});
        const double sq = sigma * std::sqrt(t);
        const double d1 = std::log(r / k) / sq + 0.5 * sq;
        const double put = k * norm_cdf(-(d1 - sq)) - r * norm_cdf(-d1);
        CHECK(std::abs(call - (r - k) - put) < 1e-14);
      }
}

TEST_CASE("vega matches a central difference and is positive") {
  for (const double sigma : {0.05, 0.2, 0.8}) {
    const double h = 1e-6;
    const double up = black_price({2.0, 0.04, 0.05, sigma + h});
    const double dn = black_price({2.0, 0.04, 0.05, sigma - h});
    const double fd = (up - dn) / (2.0 * h);
    const double an = black_vega(2.0, 0.04, 0.05, sigma);
    CHECK(an > 0.0);
    CHECK(an == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("implied vol roundtrip over the quoted box") {
  const double forward = 0.05;
  int tested = 0;
  for (const double sigma : {0.01, 0.05, 0.1, 0.2, 0.4, 0.7, 1.2, 2.0})
    for (const double x : {-2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0})
      for (const double t : {0.05, 0.25, 1.0, 4.0, 10.0}) {
        const double strike = forward * std::exp(x);
        const double price = black_price({t, strike, forward, sigma});
        const double intrinsic = std::max(forward - strike, 0.0);
        if (!(price > intrinsic && price < forward)) continue;  // not invertible

        // Whenever the quote is invertible at all, reproducing the price is
        // cheap and must hold unconditionally.
        const double sigma_back = implied_vol(t, strike, forward, price);
        CHECK(std::abs(black_price({t, strike, forward, sigma_back}) - price) <=
              1e-12 * forward);

        // Recovering the vol itself needs the quote to carry vol information.
        // An in-the-money price within ~1e-8 of intrinsic pins the double to
        // its leading digits: the optional part of the price is below the
        // rounding noise of black_price, so no solver can see the vol. Tiny
        // out-of-the-money prices are fine - they keep full relative accuracy.
        if (intrinsic > 0.0 && price - intrinsic <= 1e-8 * forward) continue;
        if (price <= 1e-15 * forward) continue;
        if (forward - price <= 1e-15 * forward) continue;
        CHECK(std::abs(sigma_back - sigma) <= 1e-10 * sigma);
        ++tested;
      }
  CHECK(tested > 100);  // the skip rules must not hollow out the box
}

TEST_CASE("implied vol rejects prices at or outside the bounds") {
  CHECK_THROWS_AS(implied_vol(1.0, 0.05, 0.05, 0.0), std::domain_error);
  CHECK_THROWS_AS(implied_vol(1.0, 0.04, 0.05, 0.01), std::domain_error);  // == intrinsic
  CHECK_THROWS_AS(implied_vol(1.0, 0.04, 0.05, 0.05), std::domain_error);  // == forward
  CHECK_THROWS_AS(implied_vol(1.0, 0.04, 0.05, 0.06), std::domain_error);
  CHECK_THROWS_AS(implied_vol(-1.0, 0.05, 0.05, 0.001), std::domain_error);
}

TEST_CASE("implied vol is increasing in price") {
  const double p1 = 0.002, p2 = 0.004;
  CHECK(implied_vol(1.0, 0.05, 0.05, p1) < implied_vol(1.0, 0.05, 0.05, p2));
}

TEST_CASE("deep out-of-the-money price still inverts") {
  const double sigma = 0.3;
  const double price = black_price({1.0, 0.15, 0.05, sigma});  // tiny premium
  CHECK(price < 1e-6);
  CHECK(implied_vol(1.0, 0.15, 0.05, price) == doctest::Approx(sigma).epsilon(1e-10));
}
