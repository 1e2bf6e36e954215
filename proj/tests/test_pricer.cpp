#include "bsabr/pricer.hpp"

#include <cmath>
#include <stdexcept>

#include "bsabr/effective_sabr.hpp"
#include "bsabr/hagan_vol.hpp"

#include "doctest.h"

using namespace bsabr;

namespace {
const SabrParams base{0.10, 1.0, -0.5, 0.5, 0.0};

CapletSpec make_spec(double strike, CapletStyle style, AccrualPeriod period,
                     double discount = 1.0, double forward_rate = 0.05) {
  CapletSpec s;
  s.strike = strike;
  s.style = style;
  s.period = period;
  s.discount = discount;
  s.forward_rate = forward_rate;
  return s;
}
}  // namespace

TEST_CASE("forward caplet, frozen reference values") {
  const auto atm = price_forward_caplet(
      make_spec(0.05, CapletStyle::forward, {0.5, 1.0}), base);
  CHECK(atm.present_value == doctest::Approx(0.0014149522136872976).epsilon(1e-13));
  CHECK(atm.implied_vol.has_value());
  CHECK(*atm.implied_vol == doctest::Approx(0.10033854166666667).epsilon(1e-14));
  CHECK(atm.time_to_exercise_quoted == 0.5);
  CHECK_FALSE(atm.effective_params_used.has_value());

  const auto itm = price_forward_caplet(
      make_spec(0.04, CapletStyle::forward, {0.5, 1.0}), base);
  CHECK(itm.present_value == doctest::Approx(0.010013542759745739).epsilon(1e-13));
  const auto otm = price_forward_caplet(
      make_spec(0.06, CapletStyle::forward, {0.5, 1.0}), base);
  CHECK(otm.present_value == doctest::Approx(2.31727992095573e-06).epsilon(1e-11));
}

TEST_CASE("seasoned forward caplet is discounted intrinsic") {
  const auto r = price_forward_caplet(
      make_spec(0.05, CapletStyle::forward, {-0.25, 0.25}, 0.99, 0.06), base);
  CHECK(r.present_value == doctest::Approx(0.99 * 0.01).epsilon(1e-15));
  CHECK_FALSE(r.implied_vol.has_value());
  CHECK(r.time_to_exercise_quoted == 0.0);
  const auto otm = price_forward_caplet(
      make_spec(0.07, CapletStyle::forward, {-0.25, 0.25}, 0.99, 0.06), base);
  CHECK(otm.present_value == 0.0);
}

TEST_CASE("backward caplet, frozen reference values") {
  const auto atm =
      price_backward_caplet(make_spec(0.05, CapletStyle::backward, {0.5, 1.0}), base, {1.0});
  CHECK(atm.present_value == doctest::Approx(0.001636799984967293).epsilon(1e-13));
  CHECK(*atm.implied_vol == doctest::Approx(0.08208001761184976).epsilon(1e-13));
  CHECK(atm.time_to_exercise_quoted == 1.0);
  REQUIRE(atm.effective_params_used.has_value());
  CHECK(atm.effective_params_used->alpha_hat
        == doctest::Approx(0.08171159087357581).epsilon(1e-13));

  const auto itm =
      price_backward_caplet(make_spec(0.04, CapletStyle::backward, {0.5, 1.0}), base, {1.0});
  CHECK(itm.present_value == doctest::Approx(0.01003918138740962).epsilon(1e-13));
  const auto otm =
      price_backward_caplet(make_spec(0.06, CapletStyle::backward, {0.5, 1.0}), base, {1.0});
  CHECK(otm.present_value == doctest::Approx(9.188823271014492e-06).epsilon(1e-11));
}

TEST_CASE("seasoned backward caplet needs no special treatment") {
  const auto r = price_backward_caplet(
      make_spec(0.05, CapletStyle::backward, {-0.25, 0.25}), base, {2.0});
  CHECK(r.present_value > 0.0);
  CHECK(r.effective_params_used->time_to_exercise == 0.25);
}

TEST_CASE("backward price is continuous in tau0 across zero") {
  const auto at = [&](double t0) {
    return price_backward_caplet(make_spec(0.05, CapletStyle::backward, {t0, 1.0}), base,
                                 {1.0})
        .present_value;
  };
  CHECK(std::abs(at(1e-6) - at(-1e-6)) < 1e-8);
  CHECK(std::abs(at(1e-6) - at(0.0)) < 1e-8);
}

TEST_CASE("degenerate window: backward equals forward quoted at tau1") {
  const auto b =
      price_backward_caplet(make_spec(0.05, CapletStyle::backward, {1.0, 1.0}), base, {1.0});
  const auto f =
      price_forward_caplet(make_spec(0.05, CapletStyle::forward, {1.0, 1.0}), base);
  CHECK(std::abs(b.present_value - f.present_value) < 1e-12);
  CHECK(b.time_to_exercise_quoted == f.time_to_exercise_quoted);
}

TEST_CASE("monotone and convex in strike at desk-scale parameters") {
  const AccrualPeriod period{0.5, 1.0};
  for (const auto style : {CapletStyle::backward, CapletStyle::forward}) {
    std::vector<double> pv;
    for (int i = 0; i <= 20; ++i) {
      const double k = 0.025 + 0.075 * i / 20.0;
      const auto spec = make_spec(k, style, period);
      pv.push_back(style == CapletStyle::backward
                       ? price_backward_caplet(spec, base, {1.0}).present_value
                       : price_forward_caplet(spec, base).present_value);
    }
    for (std::size_t i = 1; i < pv.size(); ++i) CHECK(pv[i] <= pv[i - 1] + 1e-15);
    for (std::size_t i = 1; i + 1 < pv.size(); ++i)
      CHECK(pv[i + 1] - 2.0 * pv[i] + pv[i - 1] > -1e-12);
  }
}

TEST_CASE("call upper bound") {
  for (const double k : {0.001, 0.05, 0.2}) {
    const auto spec = make_spec(k, CapletStyle::backward, {0.5, 1.0}, 0.97);
    const auto r = price_backward_caplet(spec, base, {1.0});
    CHECK(r.present_value >= 0.0);
    CHECK(r.present_value <= 0.97 * 0.05 + 1e-15);
  }
}

TEST_CASE("jensen gap diagnostics") {
  const auto spec = make_spec(0.05, CapletStyle::backward, {0.5, 1.0});
  CHECK(jensen_gap(spec, base, {1.0})
        == doctest::Approx(0.00022184777127999544).epsilon(1e-12));
  CHECK(jensen_gap(spec, base, {1.0}) > 0.0);
  CHECK_THROWS_AS(jensen_gap(make_spec(0.05, CapletStyle::backward, {-0.1, 1.0}), base,
                             {1.0}),
                  std::domain_error);

  // q -> infinity limit: both styles converge to the same price
  const auto lim = limit_q_to_infinity(base, {0.5, 1.0});
  SabrParams hat = base;
  hat.alpha = lim.alpha_hat;
  hat.rho = lim.rho_hat;
  hat.nu = lim.nu_hat;
  const double pv_b = sabr_caplet_price(1.0, 0.05, 0.05, hat, 1.0);
  const auto fwd_spec = make_spec(0.05, CapletStyle::forward, {0.5, 1.0});
  const double pv_f = price_forward_caplet(fwd_spec, base).present_value;
  CHECK(std::abs(pv_b - pv_f) < 1e-10);
}

TEST_CASE("invalid specs are rejected with the violation list") {
  auto bad = make_spec(0.05, CapletStyle::backward, {0.5, 1.0});
  bad.discount = 1.5;
  CHECK_THROWS_AS(price_backward_caplet(bad, base, {1.0}), std::invalid_argument);
  auto neg = make_spec(-0.05, CapletStyle::forward, {0.5, 1.0});
  CHECK_THROWS_AS(price_forward_caplet(neg, base), std::invalid_argument);
}
