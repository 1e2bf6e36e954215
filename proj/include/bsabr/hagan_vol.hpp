#pragma once

#include "bsabr/types.hpp"

namespace bsabr {

/// Hagan lognormal implied-vol approximation for constant-parameter SABR,
/// with x = log(R/K), z = (nu/alpha) (RK)^{(1-beta)/2} x and
/// chi(z) = log((sqrt(1 - 2 rho z + z^2) + z - rho) / (1 - rho)):
///
///   sigma = alpha / [(RK)^{(1-beta)/2} (1 + (1-beta)^2 x^2/24 + (1-beta)^4 x^4/1920)]
///           * z/chi(z)
///           * (1 + [(1-beta)^2 alpha^2 / (24 (RK)^{1-beta})
///                   + rho beta nu alpha / (4 (RK)^{(1-beta)/2})
///                   + (2 - 3 rho^2) nu^2 / 24] T)
///
/// z/chi(z) is evaluated by its series 1 - rho z/2 + (2-3rho^2) z^2/12 for
/// |z| < 1e-6. R and K are shifted internally by p.shift. Requires
/// |rho| <= 1 - 1e-10 (the chi log degenerates at the boundary).
/// For beta = 1, nu = 0 the result is exactly alpha.
double hagan_implied_vol(double expiry, double strike, double forward, const SabrParams& p);

/// discount * black_price at the Hagan vol; pure composition.
double sabr_caplet_price(double expiry, double strike, double forward, const SabrParams& p,
                         double discount);

}  // namespace bsabr
