#include "bsabr/hull_white.hpp"

#include <cmath>
#include <stdexcept>

namespace bsabr {

double psi_tilde(double t, const HullWhiteDecaySpec& spec) {
  const double t0 = spec.period.tau0, t1 = spec.period.tau1, k = spec.kappa;
  if (t > t1) throw std::domain_error("psi_tilde: t beyond tau1");
  if (t == t1) return 0.0;
  double ratio;
  if (std::abs(k) < 1e-8) {
    ratio = (t1 - t) / (t1 - t0);
  } else {
    // (e^{-kt} - e^{-k t1})/(e^{-k t0} - e^{-k t1}), rescaled by e^{k t1}
    ratio = std::expm1(k * (t1 - t)) / std::expm1(k * (t1 - t0));
  }
  return std::min(1.0, ratio);
}

double sigma_tilde(double t, const HullWhiteDecaySpec& spec) {
  const double t0 = spec.period.tau0, t1 = spec.period.tau1, k = spec.kappa;
  if (t > t1) throw std::domain_error("sigma_tilde: t beyond tau1");
  if (std::abs(k) < 1e-8) return (t1 - t0) * spec.xi;
  return -std::exp(-k * (t0 - t)) * std::expm1(-k * (t1 - t0)) / k * spec.xi;
}

DecayShapeReport decay_shape_report(double kappa, DecayExponent q,
                                    const AccrualPeriod& period,
                                    const std::vector<double>& grid) {
  const HullWhiteDecaySpec hw{kappa, period, 0.0};
  DecayShapeReport rep;
  rep.rows.reserve(grid.size());
  for (const double t : grid) {
    DecayShapeRow row;
    row.t = t;
    row.psi_q = psi(t, period, q);
    row.psi_hw = psi_tilde(t, hw);
    row.gap = row.psi_q - row.psi_hw;
    rep.rows.push_back(row);
    rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(row.gap));
  }
  return rep;
}

double fit_decay_exponent(double kappa, const AccrualPeriod& period, int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("fit_decay_exponent: grid_n < 2");
  const HullWhiteDecaySpec hw{kappa, period, 0.0};
  const auto sse = [&](double log_q) {
    const DecayExponent q{std::exp(log_q)};
    double acc = 0.0;
    for (int i = 0; i < grid_n; ++i) {
      const double t =
          period.tau0 + (period.tau1 - period.tau0) * i / (grid_n - 1.0);
      const double d = psi(t, period, q) - psi_tilde(t, hw);
      acc += d * d;
    }
    return acc;
  };
  // golden-section on log q
  const double invphi = 0.6180339887498949;
  double a = std::log(1e-2), b = std::log(1e2);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = sse(c), fd = sse(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = sse(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = sse(d);
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace bsabr
