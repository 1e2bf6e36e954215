#include <cmath>
#include <stdexcept>
#include <vector>

#include "bsabr/hull_white.hpp"
#include "doctest.h"

using namespace bsabr;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1.0);
  return g;
}

const AccrualPeriod kPeriod{0.5, 1.0};

}  // namespace

TEST_CASE("psi_tilde boundary values and clamping") {
  for (const double kappa : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const HullWhiteDecaySpec spec{kappa, kPeriod, 0.0};
    CHECK(psi_tilde(kPeriod.tau0, spec) == 1.0);
    CHECK(psi_tilde(kPeriod.tau1, spec) == 0.0);
    // before the accrual period starts the forward rate is fully alive
    CHECK(psi_tilde(0.0, spec) == 1.0);
    CHECK(psi_tilde(0.25, spec) == 1.0);
  }
  CHECK_THROWS_AS(psi_tilde(1.0 + 1e-9, HullWhiteDecaySpec{1.0, kPeriod, 0.0}),
                  std::domain_error);
}

TEST_CASE("psi_tilde frozen value, kappa = 1") {
  const HullWhiteDecaySpec spec{1.0, kPeriod, 0.0};
  // expm1(0.25)/expm1(0.5)
  CHECK(psi_tilde(0.75, spec) == doctest::Approx(0.4378234991142019).epsilon(1e-14));
}

TEST_CASE("psi_tilde is continuous in kappa at zero") {
  const HullWhiteDecaySpec plus{1e-6, kPeriod, 0.0};
  const HullWhiteDecaySpec minus{-1e-6, kPeriod, 0.0};
  for (const double t : linspace(kPeriod.tau0, kPeriod.tau1, 41)) {
    const double lin = (kPeriod.tau1 - t) / (kPeriod.tau1 - kPeriod.tau0);
    CHECK(std::abs(psi_tilde(t, plus) - std::min(1.0, lin)) < 1e-6);
    CHECK(std::abs(psi_tilde(t, minus) - std::min(1.0, lin)) < 1e-6);
  }
}

TEST_CASE("psi_tilde stays in [0,1] and is non-increasing") {
  for (const double kappa : {-5.0, -2.0, -0.5, 0.0, 0.5, 2.0, 5.0}) {
    const HullWhiteDecaySpec spec{kappa, kPeriod, 0.0};
    double prev = 2.0;
    for (const double t : linspace(kPeriod.tau0, kPeriod.tau1, 101)) {
      const double v = psi_tilde(t, spec);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("sigma_tilde frozen value and limits") {
  CHECK(sigma_tilde(0.0, HullWhiteDecaySpec{1.0, kPeriod, 0.01}) ==
        doctest::Approx(0.002386512185411911).epsilon(1e-14));
  // kappa -> 0 limit is (tau1 - tau0) * xi
  CHECK(sigma_tilde(0.3, HullWhiteDecaySpec{0.0, kPeriod, 0.01}) ==
        doctest::Approx(0.005).epsilon(1e-15));
  CHECK(std::abs(sigma_tilde(0.3, HullWhiteDecaySpec{1e-7, kPeriod, 0.01}) - 0.005) < 1e-9);
  // xi = 0 kills the volatility regardless of kappa
  CHECK(sigma_tilde(0.2, HullWhiteDecaySpec{2.0, kPeriod, 0.0}) == 0.0);
  CHECK_THROWS_AS(sigma_tilde(1.5, HullWhiteDecaySpec{1.0, kPeriod, 0.01}),
                  std::domain_error);
}

TEST_CASE("decay_shape_report: kappa=0 matches q=1 exactly") {
  const auto rep = decay_shape_report(0.0, DecayExponent{1.0}, kPeriod,
                                      linspace(kPeriod.tau0, kPeriod.tau1, 51));
  CHECK(rep.rows.size() == 51);
  CHECK(rep.max_abs_gap == 0.0);
  for (const auto& row : rep.rows) CHECK(row.gap == 0.0);
}

TEST_CASE("decay shape correspondence: curvature classes") {
  const auto grid = linspace(kPeriod.tau0, kPeriod.tau1, 41);
  const auto second_diff_signs = [&](const std::vector<double>& y, double sign) {
    // strict interior second differences; sign > 0 means convex
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
      const double d2 = y[i + 1] - 2.0 * y[i] + y[i - 1];
      CHECK(d2 * sign > 0.0);
    }
  };
  struct Pair {
    double kappa;
    double q;
    double sign;  // +1 convex, -1 concave
  };
  for (const Pair pr : {Pair{2.0, 3.0, +1.0}, Pair{-2.0, 0.5, -1.0}}) {
    const auto rep = decay_shape_report(pr.kappa, DecayExponent{pr.q}, kPeriod, grid);
    std::vector<double> yq, yhw;
    for (const auto& row : rep.rows) {
      yq.push_back(row.psi_q);
      yhw.push_back(row.psi_hw);
    }
    second_diff_signs(yq, pr.sign);
    second_diff_signs(yhw, pr.sign);
    // both decay from 1 to 0
    CHECK(yq.front() == 1.0);
    CHECK(yhw.front() == 1.0);
    CHECK(yq.back() == 0.0);
    CHECK(yhw.back() == 0.0);
  }
}

TEST_CASE("fit_decay_exponent recovers q=1 at kappa=0") {
  CHECK(fit_decay_exponent(0.0, kPeriod) == doctest::Approx(1.0).epsilon(1e-6));
  // positive mean reversion maps to a convex decay, i.e. q above 1
  CHECK(fit_decay_exponent(2.0, kPeriod) > 1.0);
  CHECK(fit_decay_exponent(-2.0, kPeriod) < 1.0);
  CHECK_THROWS_AS(fit_decay_exponent(1.0, kPeriod, 1), std::invalid_argument);
}
