#include "bsabr/pricer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "bsabr/hagan_vol.hpp"

namespace bsabr {

namespace {

void require_valid(const SabrParams& p, const CapletSpec& spec) {
  const auto violations = validate(p, spec);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "pricer: invalid inputs:";
  for (const auto& s : violations) msg << ' ' << s;
  throw std::invalid_argument(msg.str());
}

}  // namespace

CapletResult price_forward_caplet(const CapletSpec& spec, const SabrParams& p) {
  if (spec.style != CapletStyle::forward)
    throw std::invalid_argument("price_forward_caplet: spec.style must be forward");
  require_valid(p, spec);
  const double tau0 = spec.period.tau0;

  CapletResult res;
  if (tau0 <= 0.0) {
    // fixing already realized: discounted intrinsic on the supplied R(tau0)
    res.present_value = spec.discount * std::max(spec.forward_rate - spec.strike, 0.0);
    res.time_to_exercise_quoted = 0.0;
    return res;
  }
  const double vol = hagan_implied_vol(tau0, spec.strike, spec.forward_rate, p);
  res.present_value = sabr_caplet_price(tau0, spec.strike, spec.forward_rate, p, spec.discount);
  res.implied_vol = vol;
  res.time_to_exercise_quoted = tau0;
  return res;
}

CapletResult price_backward_caplet(const CapletSpec& spec, const SabrParams& p,
                                   DecayExponent q) {
  if (spec.style != CapletStyle::backward)
    throw std::invalid_argument("price_backward_caplet: spec.style must be backward");
  require_valid(p, spec);
  const double tau1 = spec.period.tau1;

  const EffectiveSabrParams eff = effective_params(p, spec.period, q);
  SabrParams hat = p;
  hat.alpha = eff.alpha_hat;
  hat.rho = eff.rho_hat;
  hat.nu = eff.nu_hat;

  CapletResult res;
  res.implied_vol = hagan_implied_vol(tau1, spec.strike, spec.forward_rate, hat);
  res.present_value = sabr_caplet_price(tau1, spec.strike, spec.forward_rate, hat, spec.discount);
  res.effective_params_used = eff;
  res.time_to_exercise_quoted = tau1;
  return res;
}

double jensen_gap(const CapletSpec& spec, const SabrParams& p, DecayExponent q) {
  if (spec.period.tau0 < 0.0)
    throw std::domain_error("jensen_gap: requires tau0 >= 0 (accrual not yet entered)");
  CapletSpec bwd = spec;
  bwd.style = CapletStyle::backward;
  CapletSpec fwd = spec;
  fwd.style = CapletStyle::forward;
  return price_backward_caplet(bwd, p, q).present_value
       - price_forward_caplet(fwd, p).present_value;
}

}  // namespace bsabr
