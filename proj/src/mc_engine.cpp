#include "bsabr/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "bsabr/black76.hpp"
#include "bsabr/philox.hpp"

namespace bsabr {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

struct StepGrid {
  std::vector<double> t;                 // n_steps + 1 points, t[0] = 0, back = tau1
  std::vector<double> dt, sqdt, psi_k;   // per step
  std::ptrdiff_t idx_tau0 = -1;          // grid index of tau0, -1 if tau0 <= 0
};

StepGrid build_grid(const AccrualPeriod& per, DecayExponent q, double dt, bool midpoint) {
  StepGrid g;
  g.t.push_back(0.0);
  const double snap = 1e-12 * per.tau1;
  for (std::int64_t k = 1;; ++k) {
    const double tk = static_cast<double>(k) * dt;
    if (tk >= per.tau1 - snap) break;
    g.t.push_back(tk);
  }
  if (per.tau0 > 0.0 && per.tau0 < per.tau1) {
    const auto it = std::lower_bound(g.t.begin(), g.t.end(), per.tau0);
    const bool on_grid = (it != g.t.end() && std::abs(*it - per.tau0) < snap)
                      || (it != g.t.begin() && std::abs(*(it - 1) - per.tau0) < snap);
    if (!on_grid) g.t.insert(it, per.tau0);
  }
  g.t.push_back(per.tau1);

  if (per.tau0 >= 0.0) {
    if (per.tau0 == 0.0) {
      g.idx_tau0 = 0;
    } else {
      for (std::size_t i = 0; i < g.t.size(); ++i)
        if (std::abs(g.t[i] - per.tau0) < snap) { g.idx_tau0 = static_cast<std::ptrdiff_t>(i); break; }
    }
  }

  const std::size_t n = g.t.size() - 1;
  g.dt.resize(n);
  g.sqdt.resize(n);
  g.psi_k.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    g.dt[k] = g.t[k + 1] - g.t[k];
    g.sqdt[k] = std::sqrt(g.dt[k]);
    const double eval_at = midpoint ? 0.5 * (g.t[k] + g.t[k + 1]) : g.t[k];
    g.psi_k[k] = psi(eval_at, per, q);
  }
  return g;
}

void check_config(const SabrParams& p, const AccrualPeriod& per, DecayExponent q,
                  double forward_rate, const McConfig& cfg) {
  if (!(per.tau1 > 0.0) || !(per.tau0 <= per.tau1))
    throw std::invalid_argument("mc_engine: invalid accrual period");
  if (!(q.q > 0.0)) throw std::invalid_argument("mc_engine: q must be > 0");
  if (!(p.alpha > 0.0) || !(p.nu >= 0.0) || !(std::abs(p.rho) <= 1.0))
    throw std::invalid_argument("mc_engine: invalid SABR parameters");
  if (!(forward_rate + p.shift > 0.0))
    throw std::invalid_argument("mc_engine: forward_rate + shift <= 0");
  if (cfg.n_paths < 1) throw std::invalid_argument("mc_engine: n_paths < 1");
  if (!(cfg.dt > 0.0 && cfg.dt <= per.tau1))
    throw std::invalid_argument("mc_engine: dt outside (0, tau1]");
  if (cfg.scheme == McScheme::log_euler_beta1 && p.beta != 1.0)
    throw std::invalid_argument("mc_engine: log_euler_beta1 requires beta = 1");
  if (cfg.antithetic && (cfg.n_paths % 2) != 0)
    throw std::invalid_argument("mc_engine: antithetic needs an even n_paths");
  if (cfg.n_dump_paths < 0) throw std::invalid_argument("mc_engine: n_dump_paths < 0");
}

// One full trajectory on X = R + shift. `traj` (optional) receives R on every
// grid point. Keep the arithmetic expressions in this function and in
// simulate_paths_serial textually identical: the bit-identity test between
// the OpenMP kernel and the serial reference relies on IEEE-identical
// evaluation order.
void run_one_path(std::uint64_t stream, double sign, const StepGrid& g, const SabrParams& p,
                  double x0, McScheme scheme, std::uint64_t seed, double& out_r0,
                  double& out_r1, std::int64_t& absorbed, double* traj) {
  const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
  double x = x0;
  double sig = p.alpha;
  bool dead = false;
  if (traj) traj[0] = x - p.shift;
  if (g.idx_tau0 == 0) out_r0 = x - p.shift;

  Philox4x64::Block blk{};
  const std::size_t n = g.dt.size();
  for (std::size_t k = 0; k < n; ++k) {
    if ((k & 1u) == 0) blk = Philox4x64::block(stream, k >> 1, 0, 0, seed, 0);
    double z_w, z_p;
    box_muller(blk[(k & 1u) * 2], blk[(k & 1u) * 2 + 1], z_w, z_p);
    z_w *= sign;
    z_p *= sign;
    const double z_b = p.rho * z_w + rho_c * z_p;
    const double a = g.psi_k[k] * sig;
    if (scheme == McScheme::log_euler_beta1) {
      x *= std::exp(-0.5 * a * a * g.dt[k] + a * g.sqdt[k] * z_b);
    } else if (!dead) {
      x += a * std::pow(std::max(x, 0.0), p.beta) * g.sqdt[k] * z_b;
      if (x <= 0.0) {
        x = 0.0;
        dead = true;
        absorbed += 1;
      }
    }
    sig *= std::exp(-0.5 * p.nu * p.nu * g.dt[k] + p.nu * g.sqdt[k] * z_w);
    if (traj) traj[k + 1] = x - p.shift;
    if (static_cast<std::ptrdiff_t>(k + 1) == g.idx_tau0) out_r0 = x - p.shift;
  }
  out_r1 = x - p.shift;
}

McPaths prepare_output(const StepGrid& g, const McConfig& cfg) {
  McPaths out;
  out.r_tau1.resize(static_cast<std::size_t>(cfg.n_paths));
  if (g.idx_tau0 >= 0) out.r_tau0.resize(static_cast<std::size_t>(cfg.n_paths));
  const std::int64_t n_dump = std::min<std::int64_t>(cfg.n_dump_paths, cfg.n_paths);
  if (n_dump > 0) {
    out.dump_times = g.t;
    out.dumped.assign(static_cast<std::size_t>(n_dump),
                      std::vector<double>(g.t.size(), 0.0));
  }
  return out;
}

}  // namespace

McPaths simulate_paths(const SabrParams& p, const AccrualPeriod& per, DecayExponent q,
                       double forward_rate, const McConfig& cfg) {
  check_config(p, per, q, forward_rate, cfg);
  const StepGrid g = build_grid(per, q, cfg.dt, cfg.psi_midpoint);
  McPaths out = prepare_output(g, cfg);
  const double x0 = forward_rate + p.shift;
  const std::int64_t n = cfg.n_paths;
  const std::int64_t n_dump = static_cast<std::int64_t>(out.dumped.size());
  std::int64_t absorbed = 0;

#pragma omp parallel for schedule(static) reduction(+ : absorbed)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint64_t stream = cfg.antithetic ? static_cast<std::uint64_t>(i / 2)
                                                : static_cast<std::uint64_t>(i);
    const double sign = (cfg.antithetic && (i & 1)) ? -1.0 : 1.0;
    double r0 = forward_rate, r1 = 0.0;
    run_one_path(stream, sign, g, p, x0, cfg.scheme, cfg.seed, r0, r1, absorbed,
                 i < n_dump ? out.dumped[static_cast<std::size_t>(i)].data() : nullptr);
    out.r_tau1[static_cast<std::size_t>(i)] = r1;
    if (g.idx_tau0 >= 0) out.r_tau0[static_cast<std::size_t>(i)] = r0;
  }
  out.absorbed = absorbed;
  return out;
}

McPaths simulate_paths_serial(const SabrParams& p, const AccrualPeriod& per, DecayExponent q,
                              double forward_rate, const McConfig& cfg) {
  check_config(p, per, q, forward_rate, cfg);
  const StepGrid g = build_grid(per, q, cfg.dt, cfg.psi_midpoint);
  McPaths out = prepare_output(g, cfg);
  const double x0 = forward_rate + p.shift;
  const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
  const std::int64_t n_dump = static_cast<std::int64_t>(out.dumped.size());
  const std::size_t n_steps = g.dt.size();

  for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
    const std::uint64_t stream = cfg.antithetic ? static_cast<std::uint64_t>(i / 2)
                                                : static_cast<std::uint64_t>(i);
    const double sign = (cfg.antithetic && (i & 1)) ? -1.0 : 1.0;
    double* traj = i < n_dump ? out.dumped[static_cast<std::size_t>(i)].data() : nullptr;
    double x = x0;
    double sig = p.alpha;
    bool dead = false;
    if (traj) traj[0] = x - p.shift;
    if (g.idx_tau0 == 0 && !out.r_tau0.empty())
      out.r_tau0[static_cast<std::size_t>(i)] = x - p.shift;

    Philox4x64::Block blk{};
    for (std::size_t k = 0; k < n_steps; ++k) {
      if ((k & 1u) == 0) blk = Philox4x64::block(stream, k >> 1, 0, 0, cfg.seed, 0);
      double z_w, z_p;
      box_muller(blk[(k & 1u) * 2], blk[(k & 1u) * 2 + 1], z_w, z_p);
      z_w *= sign;
      z_p *= sign;
      const double z_b = p.rho * z_w + rho_c * z_p;
      const double a = g.psi_k[k] * sig;
      if (cfg.scheme == McScheme::log_euler_beta1) {
        x *= std::exp(-0.5 * a * a * g.dt[k] + a * g.sqdt[k] * z_b);
      } else if (!dead) {
        x += a * std::pow(std::max(x, 0.0), p.beta) * g.sqdt[k] * z_b;
        if (x <= 0.0) {
          x = 0.0;
          dead = true;
          out.absorbed += 1;
        }
      }
      sig *= std::exp(-0.5 * p.nu * p.nu * g.dt[k] + p.nu * g.sqdt[k] * z_w);
      if (traj) traj[k + 1] = x - p.shift;
      if (static_cast<std::ptrdiff_t>(k + 1) == g.idx_tau0)
        out.r_tau0[static_cast<std::size_t>(i)] = x - p.shift;
    }
    out.r_tau1[static_cast<std::size_t>(i)] = x - p.shift;
  }
  return out;
}

std::pair<McPaths, McPaths> simulate_paths_step_halved(const SabrParams& p,
                                                       const AccrualPeriod& per,
                                                       DecayExponent q, double forward_rate,
                                                       const McConfig& cfg) {
  check_config(p, per, q, forward_rate, cfg);
  McConfig plain = cfg;
  plain.n_dump_paths = 0;
  const StepGrid coarse = build_grid(per, q, plain.dt, plain.psi_midpoint);

  // fine grid: midpoint-refined coarse grid (shares tau0/tau1 exactly)
  StepGrid fine;
  for (std::size_t k = 0; k + 1 < coarse.t.size(); ++k) {
    fine.t.push_back(coarse.t[k]);
    fine.t.push_back(0.5 * (coarse.t[k] + coarse.t[k + 1]));
  }
  fine.t.push_back(coarse.t.back());
  fine.idx_tau0 = coarse.idx_tau0 >= 0 ? 2 * coarse.idx_tau0 : -1;
  const std::size_t nf = fine.t.size() - 1;
  fine.dt.resize(nf);
  fine.sqdt.resize(nf);
  fine.psi_k.resize(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    fine.dt[k] = fine.t[k + 1] - fine.t[k];
    fine.sqdt[k] = std::sqrt(fine.dt[k]);
    const double eval_at =
        plain.psi_midpoint ? 0.5 * (fine.t[k] + fine.t[k + 1]) : fine.t[k];
    fine.psi_k[k] = psi(eval_at, per, q);
  }

  McPaths out_c = prepare_output(coarse, plain);
  McPaths out_f = prepare_output(fine, plain);
  const double x0 = forward_rate + p.shift;
  const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
  const std::size_t nc = coarse.dt.size();
  const std::int64_t n = plain.n_paths;

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint64_t stream = plain.antithetic ? static_cast<std::uint64_t>(i / 2)
                                                  : static_cast<std::uint64_t>(i);
    const double sign = (plain.antithetic && (i & 1)) ? -1.0 : 1.0;
    double xc = x0, xf = x0, sig_c = p.alpha, sig_f = p.alpha;
    double r0c = forward_rate, r0f = forward_rate;
    if (coarse.idx_tau0 == 0) { r0c = xc - p.shift; r0f = xf - p.shift; }

    for (std::size_t k = 0; k < nc; ++k) {
      // one Philox block = the two fine sub-steps of coarse step k
      const Philox4x64::Block blk =
          Philox4x64::block(stream, static_cast<std::uint64_t>(k), 0, 0, plain.seed, 0);
      double zw[2], zp[2];
      box_muller(blk[0], blk[1], zw[0], zp[0]);
      box_muller(blk[2], blk[3], zw[1], zp[1]);
      for (int h = 0; h < 2; ++h) {
        const std::size_t kf = 2 * k + static_cast<std::size_t>(h);
        const double w = zw[h] * sign, pz = zp[h] * sign;
        const double zb = p.rho * w + rho_c * pz;
        const double a = fine.psi_k[kf] * sig_f;
        if (plain.scheme == McScheme::log_euler_beta1) {
          xf *= std::exp(-0.5 * a * a * fine.dt[kf] + a * fine.sqdt[kf] * zb);
        } else {
          xf += a * std::pow(std::max(xf, 0.0), p.beta) * fine.sqdt[kf] * zb;
          if (xf < 0.0) xf = 0.0;
        }
        sig_f *= std::exp(-0.5 * p.nu * p.nu * fine.dt[kf] + p.nu * fine.sqdt[kf] * w);
        if (static_cast<std::ptrdiff_t>(kf + 1) == fine.idx_tau0) r0f = xf - p.shift;
      }
      // Brownian aggregation: the coarse increments are the sums of the fine
      // ones, normalized back to unit variance
      const double wsum = (zw[0] * fine.sqdt[2 * k] + zw[1] * fine.sqdt[2 * k + 1])
                        / coarse.sqdt[k] * sign;
      const double psum = (zp[0] * fine.sqdt[2 * k] + zp[1] * fine.sqdt[2 * k + 1])
                        / coarse.sqdt[k] * sign;
      const double zb = p.rho * wsum + rho_c * psum;
      const double a = coarse.psi_k[k] * sig_c;
      if (plain.scheme == McScheme::log_euler_beta1) {
        xc *= std::exp(-0.5 * a * a * coarse.dt[k] + a * coarse.sqdt[k] * zb);
      } else {
        xc += a * std::pow(std::max(xc, 0.0), p.beta) * coarse.sqdt[k] * zb;
        if (xc < 0.0) xc = 0.0;
      }
      sig_c *= std::exp(-0.5 * p.nu * p.nu * coarse.dt[k] + p.nu * coarse.sqdt[k] * wsum);
      if (static_cast<std::ptrdiff_t>(k + 1) == coarse.idx_tau0) r0c = xc - p.shift;
    }
    out_c.r_tau1[static_cast<std::size_t>(i)] = xc - p.shift;
    out_f.r_tau1[static_cast<std::size_t>(i)] = xf - p.shift;
    if (coarse.idx_tau0 >= 0) {
      out_c.r_tau0[static_cast<std::size_t>(i)] = r0c;
      out_f.r_tau0[static_cast<std::size_t>(i)] = r0f;
    }
  }
  return {std::move(out_c), std::move(out_f)};
}

namespace {

// serial fixed-order mean/SE with compensated summation; when antithetic,
// statistics are taken over pair averages (the independent sampling units)
void mean_and_se(const std::vector<double>& payoff, bool antithetic, double& mean,
                 double& se) {
  const std::size_t n_units = antithetic ? payoff.size() / 2 : payoff.size();
  auto unit = [&](std::size_t j) {
    return antithetic ? 0.5 * (payoff[2 * j] + payoff[2 * j + 1]) : payoff[j];
  };
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < n_units; ++j) {
    const double y = unit(j) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  mean = sum / static_cast<double>(n_units);
  double ss = 0.0, comp2 = 0.0;
  for (std::size_t j = 0; j < n_units; ++j) {
    const double d = unit(j) - mean;
    const double y = d * d - comp2;
    const double t = ss + y;
    comp2 = (t - ss) - y;
    ss = t;
  }
  se = n_units > 1
           ? std::sqrt(ss / (static_cast<double>(n_units) * (static_cast<double>(n_units) - 1.0)))
           : 0.0;
}

}  // namespace

McSmile smile_from_paths(const McPaths& paths, const std::vector<double>& strikes,
                         CapletStyle style, const SabrParams& p, const AccrualPeriod& per,
                         double forward_rate, double discount, bool antithetic) {
  if (strikes.empty()) throw std::invalid_argument("smile_from_paths: empty strike grid");
  const std::vector<double>* samples = nullptr;
  double expiry = 0.0;
  if (style == CapletStyle::backward) {
    samples = &paths.r_tau1;
    expiry = per.tau1;
  } else {
    if (!(per.tau0 > 0.0) || paths.r_tau0.empty())
      throw std::invalid_argument("smile_from_paths: forward style needs tau0 > 0 samples");
    samples = &paths.r_tau0;
    expiry = per.tau0;
  }

  McSmile s;
  s.style = style;
  s.expiry = expiry;
  s.strikes = strikes;
  const std::size_t m = strikes.size();
  s.prices.resize(m);
  s.std_errors.resize(m);
  s.implied_vols.assign(m, nan_v);
  s.implied_vol_std_errors.assign(m, nan_v);
  s.vol_ok.assign(m, 0);

  std::vector<double> payoff(samples->size());
  for (std::size_t j = 0; j < m; ++j) {
    const double k = strikes[j];
    for (std::size_t i = 0; i < payoff.size(); ++i)
      payoff[i] = std::max((*samples)[i] - k, 0.0);
    double mean = 0.0, se = 0.0;
    mean_and_se(payoff, antithetic, mean, se);
    s.prices[j] = discount * mean;
    s.std_errors[j] = discount * se;
    try {
      const double vol = implied_vol(expiry, k + p.shift, forward_rate + p.shift, mean);
      s.implied_vols[j] = vol;
      s.implied_vol_std_errors[j] =
          se / black_vega(expiry, k + p.shift, forward_rate + p.shift, vol);
      s.vol_ok[j] = 1;
    } catch (const std::domain_error&) {
      // price outside the invertible bracket (MC noise / zero exceedance)
    }
  }
  return s;
}

McSmile mc_caplet_smile(const SabrParams& p, const AccrualPeriod& per, DecayExponent q,
                        const std::vector<double>& strikes, const McConfig& cfg,
                        CapletStyle style, double forward_rate, double discount) {
  const McPaths paths = simulate_paths(p, per, q, forward_rate, cfg);
  return smile_from_paths(paths, strikes, style, p, per, forward_rate, discount,
                          cfg.antithetic);
}

std::vector<JensenMcRow> mc_jensen_gaps(const McPaths& paths,
                                        const std::vector<double>& strikes, double discount,
                                        bool antithetic) {
  if (paths.r_tau0.empty())
    throw std::invalid_argument("mc_jensen_gaps: needs R(tau0) samples (tau0 > 0)");
  std::vector<JensenMcRow> rows;
  rows.reserve(strikes.size());
  std::vector<double> gap(paths.r_tau1.size());
  for (const double k : strikes) {
    for (std::size_t i = 0; i < gap.size(); ++i)
      gap[i] = std::max(paths.r_tau1[i] - k, 0.0) - std::max(paths.r_tau0[i] - k, 0.0);
    double mean = 0.0, se = 0.0;
    mean_and_se(gap, antithetic, mean, se);
    rows.push_back({k, discount * mean, discount * se});
  }
  return rows;
}

std::vector<double> default_strike_grid(double forward_rate, int n, double lo_mult,
                                        double hi_mult) {
  if (n < 1 || !(lo_mult > 0.0) || !(hi_mult >= lo_mult))
    throw std::invalid_argument("default_strike_grid: bad grid spec");
  std::vector<double> ks(static_cast<std::size_t>(n));
  if (n == 1) {
    ks[0] = forward_rate * lo_mult;
    return ks;
  }
  const double ratio = std::log(hi_mult / lo_mult);
  for (int i = 0; i < n; ++i)
    ks[static_cast<std::size_t>(i)] =
        forward_rate * lo_mult * std::exp(ratio * i / (n - 1.0));
  return ks;
}

}  // namespace bsabr
