#include "bsabr/types.hpp"

#include <cmath>
#include <stdexcept>

namespace bsabr {

double psi(double t, const AccrualPeriod& period, DecayExponent q) {
  if (t > period.tau1)
    throw std::domain_error("psi: t beyond accrual end tau1");
  if (t == period.tau1) return 0.0;  // also covers the degenerate tau0 == tau1 window
  const double ratio = (period.tau1 - t) / (period.tau1 - period.tau0);
  if (ratio >= 1.0) return 1.0;
  return std::pow(ratio, q.q);
}

std::vector<std::string> validate(const SabrParams& p, const CapletSpec& spec) {
  std::vector<std::string> v;
  if (!(p.alpha > 0.0)) v.push_back("alpha <= 0");
  if (!(p.nu >= 0.0)) v.push_back("nu < 0");
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) v.push_back("beta out of [0,1]");
  if (!(p.rho >= -1.0 && p.rho <= 1.0)) v.push_back("rho out of [-1,1]");
  if (!(p.shift >= 0.0)) v.push_back("shift < 0");
  if (!(spec.period.tau1 > 0.0)) v.push_back("tau1 <= 0");
  // tau0 == tau1 is admitted as the degenerate no-decay boundary (plain SABR)
  if (!(spec.period.tau0 <= spec.period.tau1)) v.push_back("tau0 > tau1");
  if (!(spec.discount > 0.0 && spec.discount <= 1.0)) v.push_back("discount out of (0,1]");
  if (!(spec.forward_rate + p.shift > 0.0)) v.push_back("forward_rate + shift <= 0");
  if (!(spec.strike + p.shift > 0.0)) v.push_back("strike + shift <= 0");
  return v;
}

}  // namespace bsabr
