#pragma once

#include <optional>

#include "bsabr/effective_sabr.hpp"
#include "bsabr/types.hpp"

namespace bsabr {

struct CapletResult {
  double present_value = 0.0;
  /// Black vol the price was quoted at; absent for the deterministic
  /// intrinsic-value case (forward style, tau0 <= 0).
  std::optional<double> implied_vol;
  /// Populated for backward style only.
  std::optional<EffectiveSabrParams> effective_params_used;
  /// Exercise time of the quote: tau0 for forward style (0 when expired),
  /// tau1 for backward style.
  double time_to_exercise_quoted = 0.0;
};

/// Forward-looking caplet. tau0 > 0: discount * Black(tau0, K, R(0),
/// hagan_vol(tau0, ...)). tau0 <= 0: the fixing is realized, the caller
/// supplies it as spec.forward_rate, and the value is the discounted
/// intrinsic (R(tau0) - K)^+.
CapletResult price_forward_caplet(const CapletSpec& spec, const SabrParams& p);

/// Backward-looking caplet for tau0 of either sign: discount * Black(tau1,
/// K, R(0), hagan_vol(tau1, K, R(0), effective triple)).
CapletResult price_backward_caplet(const CapletSpec& spec, const SabrParams& p,
                                   DecayExponent q);

/// Diagnostic: backward PV minus forward PV for the same strike/period
/// (tau0 >= 0). The exact model orders this >= 0; the approximation layer
/// is not proven to preserve the sign, so this reports rather than asserts.
double jensen_gap(const CapletSpec& spec, const SabrParams& p, DecayExponent q);

}  // namespace bsabr
