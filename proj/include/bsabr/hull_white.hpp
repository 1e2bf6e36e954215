#pragma once

#include <vector>

#include "bsabr/types.hpp"

namespace bsabr {

/// Decay shape implied by a Hull-White short rate with mean-reversion speed
/// kappa, used to compare the power-law psi against a classical
/// term-structure model. xi is the (constant) volatility level.
struct HullWhiteDecaySpec {
  double kappa = 0.0;
  AccrualPeriod period;
  double xi = 0.0;
};

/// psi_tilde(t) = min(1, (e^{-kappa t} - e^{-kappa tau1}) /
///                       (e^{-kappa tau0} - e^{-kappa tau1})),
/// the linear (tau1-t)/(tau1-tau0) limit below |kappa| < 1e-8. Equals 1 on
/// [0, tau0], decays monotonically to 0 at tau1.
double psi_tilde(double t, const HullWhiteDecaySpec& spec);

/// sigma_tilde(t) = (e^{-kappa (tau0-t)} - e^{-kappa (tau1-t)}) / kappa * xi,
/// with the kappa -> 0 limit (tau1 - tau0) * xi.
double sigma_tilde(double t, const HullWhiteDecaySpec& spec);

struct DecayShapeRow {
  double t = 0.0;
  double psi_q = 0.0;   ///< power-law decay min(1, .)^q
  double psi_hw = 0.0;  ///< Hull-White-implied decay
  double gap = 0.0;     ///< psi_q - psi_hw
};

struct DecayShapeReport {
  std::vector<DecayShapeRow> rows;
  double max_abs_gap = 0.0;
};

/// Pointwise comparison of the two decay functions on the given time grid.
/// Qualitatively q-1 plays the role of kappa: kappa=0 <-> q=1 is exact
/// (both linear), kappa>0 <-> q>1 are both convex, kappa<0 <-> q<1 concave.
DecayShapeReport decay_shape_report(double kappa, DecayExponent q,
                                    const AccrualPeriod& period,
                                    const std::vector<double>& grid);

/// Diagnostic only (no canonical mapping exists): least-squares fit of q to
/// psi_tilde on a uniform grid over [tau0, tau1], by golden-section search
/// on log q in [1e-2, 1e2].
double fit_decay_exponent(double kappa, const AccrualPeriod& period, int grid_n = 201);

}  // namespace bsabr
