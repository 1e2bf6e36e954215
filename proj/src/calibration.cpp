#include "bsabr/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "bsabr/black76.hpp"
#include "bsabr/effective_sabr.hpp"
#include "bsabr/hagan_vol.hpp"
#include "bsabr/pricer.hpp"

namespace bsabr {

namespace {

constexpr double rho_cap = 0.999;
constexpr double q_min = 1e-3;
constexpr double q_max = 1e3;

// quotes normalized to vol space at ingestion
struct VolQuote {
  double strike, vol, weight;
};

std::vector<VolQuote> to_vol_quotes(const QuoteSet& qs, const SabrParams& ref) {
  if (!(qs.period.tau0 > 0.0))
    throw std::invalid_argument("calibrate_forward_smile: requires tau0 > 0");
  std::vector<VolQuote> out;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < qs.entries.size(); ++i) {
    const Quote& e = qs.entries[i];
    const std::string row = std::to_string(i + 1);  // 1-based, matches quote-file rows
    if (e.style != CapletStyle::forward) continue;
    if (!(e.weight >= 0.0))
      throw std::invalid_argument("calibrate_forward_smile: negative weight in quote row "
                                  + row);
    double vol = e.value;
    if (e.kind == QuoteKind::pv) {
      try {
        vol = implied_vol(qs.period.tau0, e.strike + ref.shift,
                          qs.forward_rate + ref.shift, e.value / qs.discount);
      } catch (const std::domain_error&) {
        throw std::invalid_argument("calibrate_forward_smile: quote row " + row
                                    + " has a PV outside the no-arbitrage bracket");
      }
    } else if (!(vol > 0.0)) {
      throw std::invalid_argument("calibrate_forward_smile: nonpositive vol in quote row "
                                  + row);
    }
    out.push_back({e.strike, vol, e.weight});
    weight_sum += e.weight;
  }
  if (!(weight_sum > 0.0))
    throw std::invalid_argument("calibrate_forward_smile: all weights zero");
  return out;
}

// ---- derivative-free simplex minimizer (Nelder-Mead with one restart) ----

struct SimplexOutcome {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

SimplexOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x0, double initial_step, int max_iter) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  for (std::size_t j = 0; j < dim; ++j) xs[j + 1][j] += initial_step;
  for (std::size_t j = 0; j <= dim; ++j) fs[j] = f(xs[j]);

  int it = 0;
  bool converged = false;
  auto order = [&] {
    std::vector<std::size_t> idx(dim + 1);
    for (std::size_t j = 0; j <= dim; ++j) idx[j] = j;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2;
    std::vector<double> fs2;
    for (auto j : idx) {
      xs2.push_back(xs[j]);
      fs2.push_back(fs[j]);
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  for (; it < max_iter; ++it) {
    order();
    double diam = 0.0;
    for (std::size_t j = 1; j <= dim; ++j)
      for (std::size_t d = 0; d < dim; ++d)
        diam = std::max(diam, std::abs(xs[j][d] - xs[0][d]));
    if (diam < 1e-10 || fs[dim] - fs[0] < 1e-18 + 1e-12 * std::abs(fs[0])) {
      converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += xs[j][d] / dim;
    auto blend = [&](double coef) {
      std::vector<double> x(dim);
      for (std::size_t d = 0; d < dim; ++d)
        x[d] = centroid[d] + coef * (xs[dim][d] - centroid[d]);
      return x;
    };

    const auto xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const auto xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[dim] = xe;
        fs[dim] = fe;
      } else {
        xs[dim] = xr;
        fs[dim] = fr;
      }
    } else if (fr < fs[dim - 1]) {
      xs[dim] = xr;
      fs[dim] = fr;
    } else {
      const bool outside = fr < fs[dim];
      const auto xc = blend(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[dim])) {
        xs[dim] = xc;
        fs[dim] = fc;
      } else {  // shrink toward the best vertex
        for (std::size_t j = 1; j <= dim; ++j) {
          for (std::size_t d = 0; d < dim; ++d)
            xs[j][d] = xs[0][d] + 0.5 * (xs[j][d] - xs[0][d]);
          fs[j] = f(xs[j]);
        }
      }
    }
  }
  order();
  return {xs[0], fs[0], it, converged};
}

}  // namespace

CalibrationResult calibrate_forward_smile(const QuoteSet& quotes, const SabrParams& initial,
                                          const FitOptions& opts) {
  const auto vq = to_vol_quotes(quotes, initial);
  const std::size_t dim = static_cast<std::size_t>(opts.fit_alpha) + opts.fit_rho + opts.fit_nu;
  if (dim == 0) throw std::invalid_argument("calibrate_forward_smile: nothing to fit");
  if (vq.size() < dim)
    throw std::invalid_argument("calibrate_forward_smile: need at least "
                                + std::to_string(dim) + " forward-looking quotes");

  const double t0 = quotes.period.tau0, r0 = quotes.forward_rate;
  double weight_sum = 0.0;
  for (const auto& q : vq) weight_sum += q.weight;

  // unconstrained coordinates: log alpha, tanh-mapped rho (|rho| <= 0.999), log nu
  const auto unpack = [&](const std::vector<double>& x) {
    SabrParams p = initial;
    std::size_t j = 0;
    if (opts.fit_alpha) p.alpha = std::exp(x[j++]);
    if (opts.fit_rho) p.rho = rho_cap * std::tanh(x[j++]);
    if (opts.fit_nu) p.nu = std::exp(x[j++]);
    return p;
  };
  std::vector<double> x0;
  if (opts.fit_alpha) x0.push_back(std::log(initial.alpha));
  if (opts.fit_rho)
    x0.push_back(std::atanh(std::clamp(initial.rho / rho_cap, -1.0 + 1e-12, 1.0 - 1e-12)));
  if (opts.fit_nu) x0.push_back(std::log(std::max(initial.nu, 1e-6)));

  const auto objective = [&](const std::vector<double>& x) {
    const SabrParams p = unpack(x);
    double acc = 0.0;
    for (const auto& q : vq) {
      const double d = hagan_implied_vol(t0, q.strike, r0, p) - q.vol;
      acc += q.weight * d * d;
    }
    return acc / weight_sum;
  };

  SimplexOutcome best = nelder_mead(objective, x0, 0.25, 2000);
  const SimplexOutcome polish = nelder_mead(objective, best.x, 0.01, 2000 - best.iterations);
  const int total_iter = best.iterations + polish.iterations;
  if (polish.f <= best.f) best = polish;

  CalibrationResult res;
  res.params = unpack(best.x);
  res.objective = best.f;
  res.iterations = total_iter;
  res.converged = best.converged && best.f <= objective(x0) + 1e-18;
  for (const auto& q : vq)
    res.residuals.push_back(hagan_implied_vol(t0, q.strike, r0, res.params) - q.vol);
  return res;
}

CalibrationResult calibrate_q_to_atm_backward(const Quote& atm_quote, const SabrParams& p,
                                              const AccrualPeriod& period,
                                              double forward_rate, double discount) {
  if (!(period.tau1 > 0.0))
    throw std::invalid_argument("calibrate_q_to_atm_backward: tau1 <= 0");
  CapletSpec spec;
  spec.strike = atm_quote.strike;
  spec.style = CapletStyle::backward;
  spec.period = period;
  spec.discount = discount;
  spec.forward_rate = forward_rate;

  double target = atm_quote.value;
  if (atm_quote.kind == QuoteKind::implied_vol)
    target = discount * black_price({period.tau1, atm_quote.strike + p.shift,
                                     forward_rate + p.shift, atm_quote.value});

  const auto price_at = [&](double q) {
    return price_backward_caplet(spec, p, DecayExponent{q}).present_value;
  };
  const double p_hi = price_at(q_min);  // q -> 0 side: largest price
  const double p_lo = price_at(q_max);  // q -> infinity side: smallest price

  // the analytic q -> infinity floor (equals the forward-looking price)
  const EffectiveSabrParams lim = limit_q_to_infinity(p, period);
  double p_floor;
  if (lim.degenerate) {
    p_floor = discount * std::max(forward_rate - atm_quote.strike, 0.0);
  } else {
    SabrParams hat = p;
    hat.alpha = lim.alpha_hat;
    hat.rho = lim.rho_hat;
    hat.nu = lim.nu_hat;
    p_floor = sabr_caplet_price(period.tau1, atm_quote.strike, forward_rate, hat, discount);
  }

  // monotonicity pre-check on a coarse q ladder
  double prev = p_hi;
  for (const double q : {1e-2, 1e-1, 1.0, 1e1, 1e2, q_max}) {
    const double cur = price_at(q);
    if (cur > prev + 1e-13 * (1.0 + std::abs(prev))) {
      std::ostringstream msg;
      msg << "calibrate_q_to_atm_backward: backward ATM price not monotone in q near q=" << q;
      throw std::runtime_error(msg.str());
    }
    prev = cur;
  }

  CalibrationResult res;
  res.params = p;
  const double slack = 1e-12 * (1.0 + std::abs(target));
  if (target > p_hi + slack)
    throw BracketError("calibrate_q_to_atm_backward: quote above the attainable range "
                       "(exceeds the q -> 0 price)",
                       p_floor, p_hi);
  if (target < p_floor - slack)
    throw BracketError("calibrate_q_to_atm_backward: quote below the attainable range "
                       "(under the q -> infinity price); inconsistent quote pair",
                       p_floor, p_hi);
  if (target <= p_lo) {
    res.q = q_max;
    res.q_capped = true;
    res.converged = true;
    res.objective = std::abs(p_lo - target);
    res.residuals = {p_lo - target};
    return res;
  }

  // price is monotone decreasing in q: bisect on log q
  double lo = std::log(q_min), hi = std::log(q_max);
  int it = 0;
  for (; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (price_at(std::exp(mid)) > target ? lo : hi) = mid;
  }
  res.q = std::exp(0.5 * (lo + hi));
  res.iterations = it;
  res.objective = std::abs(price_at(res.q) - target);
  res.residuals = {price_at(res.q) - target};
  res.converged = res.objective <= 1e-10;
  return res;
}

}  // namespace bsabr
