#include "bsabr/effective_sabr.hpp"

#include <cmath>
#include <stdexcept>

namespace bsabr {

namespace {

// tau0 == tau1 is admitted here: the closed forms are regular at the
// degenerate boundary and reduce to the plain SABR triple there.
void require_valid_period(const AccrualPeriod& period) {
  if (!(period.tau1 > 0.0) || !(period.tau0 <= period.tau1))
    throw std::domain_error("effective_sabr: invalid accrual period");
}

void require_positive_q(DecayExponent q) {
  if (!(q.q > 0.0)) throw std::domain_error("effective_sabr: q must be > 0");
}

}  // namespace

Theorem2Intermediates effective_param_intermediates(const SabrParams& p,
                                                    const AccrualPeriod& period,
                                                    DecayExponent qd) {
  require_valid_period(period);
  require_positive_q(qd);
  const double q = qd.q, t0 = period.tau0, t1 = period.tau1, rho = p.rho, nu = p.nu;

  Theorem2Intermediates m;
  m.zeta = 3.0 / (4.0 * q + 3.0)
         * (1.0 / (2.0 * q + 1.0) + rho * rho * 2.0 * q / ((3.0 * q + 2.0) * (3.0 * q + 2.0)));
  m.tau = 2.0 * q * t0 + t1;
  const double tau = m.tau;
  m.gamma = tau * (2.0 * tau * tau * tau + t1 * t1 * t1 + (4.0 * q * q - 2.0 * q) * t0 * t0 * t0
                   + 6.0 * q * t0 * t0 * t1)
              / ((4.0 * q + 3.0) * (2.0 * q + 1.0))
          + 3.0 * q * rho * rho * (t1 - t0) * (t1 - t0)
              * (3.0 * tau * tau - t1 * t1 + 5.0 * q * t0 * t0 + 4.0 * t0 * t1)
              / ((4.0 * q + 3.0) * (3.0 * q + 2.0) * (3.0 * q + 2.0));
  const double nu_hat2 = nu * nu * m.gamma * (2.0 * q + 1.0) / (tau * tau * tau * t1);
  m.H = nu * nu * (tau * tau + 2.0 * q * t0 * t0 + t1 * t1) / (2.0 * t1 * tau * (q + 1.0))
      - nu_hat2;
  return m;
}

EffectiveSabrParams effective_params_seasoned(const SabrParams& p, const AccrualPeriod& period,
                                              DecayExponent qd, bool include_exp_factor) {
  require_valid_period(period);
  require_positive_q(qd);
  if (period.tau0 > 0.0)
    throw std::domain_error("effective_params_seasoned: requires tau0 <= 0");
  const double q = qd.q, t0 = period.tau0, t1 = period.tau1;

  const double zeta = effective_param_intermediates(p, period, qd).zeta;
  const double nu_hat2 = p.nu * p.nu * zeta * (2.0 * q + 1.0);
  // alpha_hat assembled in log space: (tau1/(tau1-tau0))^{2q} underflows for
  // large q long before the combined product does
  double log_alpha = std::log(p.alpha) - 0.5 * std::log(2.0 * q + 1.0)
                   + q * std::log(t1 / (t1 - t0));
  if (include_exp_factor)
    log_alpha += 0.25 * (p.nu * p.nu / (q + 1.0) - nu_hat2) * t1;

  EffectiveSabrParams e;
  e.alpha_hat = std::exp(log_alpha);
  e.rho_hat = 2.0 * p.rho / (std::sqrt(zeta) * (3.0 * q + 2.0));
  e.nu_hat = std::sqrt(nu_hat2);
  e.time_to_exercise = t1;
  return e;
}

EffectiveSabrParams effective_params_forward(const SabrParams& p, const AccrualPeriod& period,
                                             DecayExponent qd, bool include_exp_factor) {
  require_valid_period(period);
  require_positive_q(qd);
  if (period.tau0 < 0.0)
    throw std::domain_error("effective_params_forward: requires tau0 >= 0");
  const double q = qd.q, t0 = period.tau0, t1 = period.tau1;
  // degenerate window: no decay happens, the triple is untouched (and the
  // floating-point route through gamma would only be equal algebraically)
  if (t0 == t1) return {p.alpha, p.rho, p.nu, t1, false};

  const Theorem2Intermediates m = effective_param_intermediates(p, period, qd);
  const double nu_hat2 = p.nu * p.nu * m.gamma * (2.0 * q + 1.0) / (m.tau * m.tau * m.tau * t1);
  double alpha_hat2 = p.alpha * p.alpha / (2.0 * q + 1.0) * (m.tau / t1);
  if (include_exp_factor) alpha_hat2 *= std::exp(0.5 * m.H * t1);

  EffectiveSabrParams e;
  e.alpha_hat = std::sqrt(alpha_hat2);
  e.rho_hat = p.rho * (3.0 * m.tau * m.tau + 2.0 * q * t0 * t0 + t1 * t1)
            / (std::sqrt(m.gamma) * (6.0 * q + 4.0));
  e.nu_hat = std::sqrt(nu_hat2);
  e.time_to_exercise = t1;
  return e;
}

EffectiveSabrParams effective_params(const SabrParams& p, const AccrualPeriod& period,
                                     DecayExponent q) {
  require_valid_period(period);
  return period.tau0 < 0.0 ? effective_params_seasoned(p, period, q)
                           : effective_params_forward(p, period, q);
}

EffectiveSabrParams rescale_time_to_exercise(const EffectiveSabrParams& e, double new_T) {
  if (!(new_T > 0.0)) throw std::domain_error("rescale_time_to_exercise: new_T <= 0");
  const double scale = std::sqrt(e.time_to_exercise / new_T);
  EffectiveSabrParams r = e;
  r.alpha_hat = e.alpha_hat * scale;
  r.nu_hat = e.nu_hat * scale;
  r.time_to_exercise = new_T;
  return r;
}

EffectiveSabrParams limit_q_to_infinity(const SabrParams& p, const AccrualPeriod& period) {
  require_valid_period(period);
  EffectiveSabrParams e;
  e.time_to_exercise = period.tau1;
  if (period.tau0 <= 0.0) {
    e.degenerate = true;  // fully damped: zero triple, alpha_hat > 0 relaxed
    return e;
  }
  const double scale = std::sqrt(period.tau0 / period.tau1);
  e.alpha_hat = p.alpha * scale;
  e.rho_hat = p.rho;
  e.nu_hat = p.nu * scale;
  return e;
}

EffectiveSabrParams limit_q_to_zero(const SabrParams& p, const AccrualPeriod& period) {
  require_valid_period(period);
  return {p.alpha, p.rho, p.nu, period.tau1, false};
}

SabrParams scaling_reparameterization(const SabrParams& p, const AccrualPeriod& period,
                                      DecayExponent qd) {
  require_valid_period(period);
  require_positive_q(qd);
  if (period.tau0 > 0.0)
    throw std::domain_error("scaling_reparameterization: requires tau0 <= 0");
  const double t0 = period.tau0, t1 = period.tau1;
  SabrParams s = p;
  s.alpha = p.alpha * std::sqrt(t1) * std::pow(t1 / (t1 - t0), qd.q);
  s.nu = p.nu * std::sqrt(t1);
  return s;
}

double piterbarg_alpha(double alpha, const AccrualPeriod& period) {
  require_valid_period(period);
  if (!(period.tau0 > 0.0)) throw std::domain_error("piterbarg_alpha: requires tau0 > 0");
  return alpha * std::sqrt(1.0 + (period.tau1 - period.tau0) / (3.0 * period.tau0));
}

}  // namespace bsabr
