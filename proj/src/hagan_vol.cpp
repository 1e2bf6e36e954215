#include "bsabr/hagan_vol.hpp"

#include <cmath>
#include <stdexcept>

#include "bsabr/black76.hpp"

namespace bsabr {

double hagan_implied_vol(double expiry, double strike, double forward, const SabrParams& p) {
  if (!(expiry > 0.0)) throw std::domain_error("hagan_implied_vol: expiry <= 0");
  const double k = strike + p.shift;
  const double f = forward + p.shift;
  if (!(k > 0.0) || !(f > 0.0))
    throw std::domain_error("hagan_implied_vol: nonpositive post-shift strike/forward");
  if (!(std::abs(p.rho) <= 1.0 - 1e-10))
    throw std::domain_error("hagan_implied_vol: |rho| too close to 1");

  const double x = std::log(f / k);
  const double omb = 1.0 - p.beta;
  const double fk = std::pow(f * k, 0.5 * omb);  // (RK)^{(1-beta)/2}
  const double z = p.nu / p.alpha * fk * x;

  double z_over_chi;
  if (std::abs(z) < 1e-6) {
    z_over_chi = 1.0 - 0.5 * p.rho * z + (2.0 - 3.0 * p.rho * p.rho) * z * z / 12.0;
  } else {
    const double s = std::sqrt(1.0 - 2.0 * p.rho * z + z * z);
    // chi written with log1p for accuracy when the argument is near 1
    const double chi = std::log1p((z + (z * z - 2.0 * p.rho * z) / (1.0 + s)) / (1.0 - p.rho));
    z_over_chi = z / chi;
  }

  const double x2 = x * x;
  const double denom = 1.0 + omb * omb * x2 / 24.0 + omb * omb * omb * omb * x2 * x2 / 1920.0;
  const double bracket = omb * omb * p.alpha * p.alpha / (24.0 * fk * fk)
                       + 0.25 * p.rho * p.beta * p.nu * p.alpha / fk
                       + (2.0 - 3.0 * p.rho * p.rho) * p.nu * p.nu / 24.0;
  return p.alpha / (fk * denom) * z_over_chi * (1.0 + bracket * expiry);
}

double sabr_caplet_price(double expiry, double strike, double forward, const SabrParams& p,
                         double discount) {
  if (!(discount > 0.0 && discount <= 1.0))
    throw std::domain_error("sabr_caplet_price: discount outside (0,1]");
  const double sigma = hagan_implied_vol(expiry, strike, forward, p);
  return discount * black_price({expiry, strike + p.shift, forward + p.shift, sigma});
}

}  // namespace bsabr
