#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bsabr/types.hpp"

namespace bsabr {

enum class McScheme {
  log_euler_beta1,        ///< exact lognormal step for R (requires beta = 1)
  euler_full_truncation,  ///< Euler for any beta, diffusion floored at 0, absorbing
};

struct McConfig {
  std::int64_t n_paths = 200000;
  double dt = 1.0 / 512.0;
  std::uint64_t seed = 1;
  McScheme scheme = McScheme::log_euler_beta1;
  bool antithetic = false;    ///< pairs (2j, 2j+1) share a stream with flipped sign
  bool psi_midpoint = false;  ///< evaluate psi at step midpoints instead of left endpoints
  int n_dump_paths = 0;       ///< record full trajectories for the first N paths
};

/// Per-path terminal samples. The time grid consists of the multiples of dt
/// in (0, tau1), tau0 (when strictly inside), and tau1 itself, so fixings
/// land exactly on grid points; the final step may be short.
struct McPaths {
  std::vector<double> r_tau1;  ///< R(tau1) per path
  std::vector<double> r_tau0;  ///< R(tau0) per path; empty when tau0 <= 0
  std::int64_t absorbed = 0;   ///< euler_full_truncation zero-boundary hits
  std::vector<double> dump_times;           ///< grid for dumped trajectories
  std::vector<std::vector<double>> dumped;  ///< R trajectories, first n_dump_paths
};

/// OpenMP kernel: paths are independent (counter-based per-path streams) and
/// split across threads; all reductions happen in a serial fixed-order pass
/// afterwards, so any thread count produces bit-identical results.
McPaths simulate_paths(const SabrParams& p, const AccrualPeriod& period, DecayExponent q,
                       double forward_rate, const McConfig& cfg);

/// Plain single-threaded reference loop, kept for testing the kernel;
/// must agree with simulate_paths bit-for-bit.
McPaths simulate_paths_serial(const SabrParams& p, const AccrualPeriod& period,
                              DecayExponent q, double forward_rate, const McConfig& cfg);

/// Coupled step-halving run for convergence tests: the dt/2 leg consumes
/// fresh normals, the dt leg reuses their pairwise Brownian aggregates, so
/// the two estimates differ only by discretization error.
/// Returns {coarse, fine}.
std::pair<McPaths, McPaths> simulate_paths_step_halved(const SabrParams& p,
                                                       const AccrualPeriod& period,
                                                       DecayExponent q, double forward_rate,
                                                       const McConfig& cfg);

struct McSmile {
  CapletStyle style = CapletStyle::backward;
  double expiry = 0.0;  ///< tau1 for backward, tau0 for forward
  std::vector<double> strikes;
  std::vector<double> prices;      ///< discounted PV per strike
  std::vector<double> std_errors;  ///< of the PV
  std::vector<double> implied_vols;            ///< NaN where not invertible
  std::vector<double> implied_vol_std_errors;  ///< delta-method, NaN likewise
  std::vector<char> vol_ok;  ///< 0 => price outside the invertible bracket
};

/// Prices one smile from existing paths (common random numbers across
/// styles). Forward style requires tau0 > 0.
McSmile smile_from_paths(const McPaths& paths, const std::vector<double>& strikes,
                         CapletStyle style, const SabrParams& p, const AccrualPeriod& period,
                         double forward_rate, double discount, bool antithetic);

/// simulate_paths + smile_from_paths in one call.
McSmile mc_caplet_smile(const SabrParams& p, const AccrualPeriod& period, DecayExponent q,
                        const std::vector<double>& strikes, const McConfig& cfg,
                        CapletStyle style, double forward_rate, double discount);

struct JensenMcRow {
  double strike = 0.0;
  double mean_gap = 0.0;  ///< discounted mean of (R(tau1)-K)^+ - (R(tau0)-K)^+
  double se_gap = 0.0;
};

/// Pathwise backward-minus-forward payoff gaps on common paths; the exact
/// model orders E[gap] >= 0.
std::vector<JensenMcRow> mc_jensen_gaps(const McPaths& paths,
                                        const std::vector<double>& strikes, double discount,
                                        bool antithetic);

/// Geometric grid of n strikes on [lo_mult, hi_mult] * forward_rate.
std::vector<double> default_strike_grid(double forward_rate, int n = 11, double lo_mult = 0.5,
                                        double hi_mult = 2.0);

}  // namespace bsabr
