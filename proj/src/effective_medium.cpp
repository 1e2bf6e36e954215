#include "bsabr/effective_medium.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bsabr/quadrature.hpp"

namespace bsabr::effective_medium {

namespace {

// Closed antiderivatives of phi^2 and rho*nu*phi from integrating the
// piecewise power-law decay directly; used inside the b/c/G integrands
// unless full double quadrature is requested.
double v_closed(double u, const SabrParams& p, const AccrualPeriod& per, double q) {
  const double a2 = p.alpha * p.alpha, t0 = per.tau0, t1 = per.tau1;
  if (t0 >= t1) return a2 * u;  // degenerate window: psi == 1
  if (t0 >= 0.0) {
    if (u <= t0) return a2 * u;
    return a2 / (2.0 * q + 1.0)
         * (2.0 * q * t0 + t1
            - std::pow(t1 - u, 2.0 * q + 1.0) / std::pow(t1 - t0, 2.0 * q));
  }
  return a2 * (std::pow(t1, 2.0 * q + 1.0) - std::pow(t1 - u, 2.0 * q + 1.0))
       / ((2.0 * q + 1.0) * std::pow(t1 - t0, 2.0 * q));
}

double w_closed(double u, const SabrParams& p, const AccrualPeriod& per, double q) {
  const double rna = p.rho * p.nu * p.alpha, t0 = per.tau0, t1 = per.tau1;
  if (t0 >= t1) return rna * u;
  if (t0 >= 0.0) {
    if (u <= t0) return rna * u;
    return rna / (q + 1.0)
         * (q * t0 + t1 - std::pow(t1 - u, q + 1.0) / std::pow(t1 - t0, q));
  }
  return rna * (std::pow(t1, q + 1.0) - std::pow(t1 - u, q + 1.0))
       / ((q + 1.0) * std::pow(t1 - t0, q));
}

void check_u(double u, const AccrualPeriod& per) {
  if (!(u >= 0.0 && u <= per.tau1))
    throw std::domain_error("effective_medium: u outside [0, tau1]");
}

}  // namespace

double v(double u, const SabrParams& p, const AccrualPeriod& per, DecayExponent q,
         const QuadratureOptions& opts) {
  check_u(u, per);
  const auto phi2 = [&](double s) {
    const double f = p.alpha * psi(s, per, q);
    return f * f;
  };
  return integrate(phi2, 0.0, u, opts.abs_tol, {per.tau0}, opts.min_panels,
                   nullptr, opts.rel_tol);
}

double w(double u, const SabrParams& p, const AccrualPeriod& per, DecayExponent q,
         const QuadratureOptions& opts) {
  check_u(u, per);
  const auto phi = [&](double s) { return p.alpha * psi(s, per, q); };
  return p.rho * p.nu
       * integrate(phi, 0.0, u, opts.abs_tol, {per.tau0}, opts.min_panels, nullptr,
                   opts.rel_tol);
}

EffectiveMediumIntegrals integrals(const SabrParams& p, const AccrualPeriod& per,
                                   DecayExponent qd, const QuadratureOptions& opts) {
  if (!(per.tau1 > 0.0)) throw std::domain_error("effective_medium: tau1 <= 0");
  if (!(qd.q > 0.0)) throw std::domain_error("effective_medium: q <= 0");
  const double q = qd.q, T = per.tau1, rho = p.rho, nu = p.nu;
  const std::vector<double> brk{per.tau0};

  const auto phi = [&](double s) { return p.alpha * psi(s, per, qd); };
  const auto v_at = [&](double s) {
    return opts.full_double_quadrature ? v(s, p, per, qd, opts) : v_closed(s, p, per, q);
  };
  const auto w_at = [&](double s) {
    return opts.full_double_quadrature ? w(s, p, per, qd, opts) : w_closed(s, p, per, q);
  };

  double err = 0.0;
  EffectiveMediumIntegrals m;
  m.v_of_T = integrate([&](double s) { const double f = phi(s); return f * f; }, 0.0, T,
                       opts.abs_tol, brk, opts.min_panels, &err, opts.rel_tol);
  const double vT = m.v_of_T;
  m.delta_sq = vT / T;

  const double ib = integrate([&](double s) { return (vT - v_at(s)) * phi(s); }, 0.0, T,
                              opts.abs_tol, brk, opts.min_panels, &err, opts.rel_tol);
  m.b = 2.0 * rho * nu / (vT * vT) * ib;

  const double ic1 = integrate([&](double s) { const double d = vT - v_at(s); return d * d; },
                               0.0, T, opts.abs_tol, brk, opts.min_panels, &err, opts.rel_tol);
  const double ic2 = integrate([&](double s) {
                                 const double ws = w_at(s), f = phi(s);
                                 return ws * ws * f * f;
                               },
                               0.0, T, opts.abs_tol, brk, opts.min_panels, &err, opts.rel_tol);
  m.c = 3.0 * nu * nu / (vT * vT * vT) * ic1 + 9.0 / (vT * vT * vT) * ic2 - 3.0 * m.b * m.b;

  const double ig = integrate([&](double s) { return vT - v_at(s); }, 0.0, T, opts.abs_tol,
                              brk, opts.min_panels, &err, opts.rel_tol);
  m.G = 2.0 * nu * nu / (vT * vT) * ig - m.c;

  if (err > 1e4 * opts.abs_tol) {
    std::ostringstream msg;
    msg << "effective_medium: quadrature failed to converge, error estimate " << err
        << " vs requested " << opts.abs_tol;
    throw std::runtime_error(msg.str());
  }
  return m;
}

EffectiveSabrParams effective_params_quadrature(const SabrParams& p, const AccrualPeriod& per,
                                                DecayExponent qd,
                                                const QuadratureOptions& opts) {
  const EffectiveMediumIntegrals m = integrals(p, per, qd, opts);
  const double delta = std::sqrt(m.delta_sq);
  EffectiveSabrParams e;
  e.alpha_hat = delta * std::exp(0.25 * m.delta_sq * m.G * per.tau1);
  // a vol-less model carries no correlation content: c -> 0 with nu -> 0
  e.rho_hat = m.c > 0.0 ? m.b / std::sqrt(m.c) : 0.0;
  e.nu_hat = std::sqrt(m.delta_sq * std::max(m.c, 0.0));
  e.time_to_exercise = per.tau1;
  return e;
}

}  // namespace bsabr::effective_medium
