#include "bsabr/effective_medium.hpp"

#include <cmath>

#include "bsabr/effective_sabr.hpp"

#include "doctest.h"

using namespace bsabr;
namespace em = bsabr::effective_medium;

namespace {
const SabrParams base{0.10, 1.0, -0.5, 0.5, 0.0};

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}
}  // namespace

TEST_CASE("v and w reduce to the constant-phi values before tau0") {
  const AccrualPeriod period{0.5, 1.0};
  for (const double u : {0.1, 0.3, 0.5}) {
    CHECK(em::v(u, base, period, {1.0})
          == doctest::Approx(base.alpha * base.alpha * u).epsilon(1e-12));
    CHECK(em::w(u, base, period, {1.0})
          == doctest::Approx(base.rho * base.nu * base.alpha * u).epsilon(1e-12));
  }
}

TEST_CASE("v matches the closed piecewise forms inside the decay window") {
  const double q = 1.7, t0 = 0.25, t1 = 1.0;
  const AccrualPeriod period{t0, t1};
  const double a2 = base.alpha * base.alpha;
  for (const double u : {0.3, 0.6, 1.0}) {
    const double closed = a2 / (2.0 * q + 1.0)
                        * (2.0 * q * t0 + t1
                           - std::pow(t1 - u, 2.0 * q + 1.0) / std::pow(t1 - t0, 2.0 * q));
    CHECK(rel_gap(em::v(u, base, period, {q}), closed) < 1e-10);
  }
  // seasoned form
  const AccrualPeriod seasoned{-0.5, 0.5};
  for (const double u : {0.1, 0.4}) {
    const double closed = a2
                        * (std::pow(0.5, 2.0 * q + 1.0) - std::pow(0.5 - u, 2.0 * q + 1.0))
                        / ((2.0 * q + 1.0) * std::pow(1.0, 2.0 * q));
    CHECK(rel_gap(em::v(u, base, seasoned, {q}), closed) < 1e-10);
  }
}

TEST_CASE("constant-phi integrals have the hand-derived values") {
  // tau0 = tau1 clamps psi to 1 on [0, T): phi is the constant alpha, so
  // v(s) = alpha^2 s and w(s) = rho nu alpha s, and the four integrals
  // evaluate by hand to b = rho nu/alpha, c = nu^2/alpha^2, G = 0,
  // Delta = alpha
  const AccrualPeriod clamp{1.0, 1.0};
  const auto ints = em::integrals(base, clamp, {1.0});
  CHECK(rel_gap(ints.v_of_T, base.alpha * base.alpha) < 1e-12);
  CHECK(rel_gap(ints.delta_sq, base.alpha * base.alpha) < 1e-12);
  CHECK(rel_gap(ints.b, base.rho * base.nu / base.alpha) < 1e-10);
  CHECK(rel_gap(ints.c, base.nu * base.nu / (base.alpha * base.alpha)) < 1e-10);
  CHECK(std::abs(ints.G) < 1e-9);

  const auto e = em::effective_params_quadrature(base, clamp, {1.0});
  CHECK(rel_gap(e.alpha_hat, base.alpha) < 1e-10);
  CHECK(std::abs(e.rho_hat - base.rho) < 1e-10);
  CHECK(rel_gap(e.nu_hat, base.nu) < 1e-10);
}

TEST_CASE("oracle matches the closed forms on both branches") {
  const auto check = [](const AccrualPeriod& period, DecayExponent q) {
    const auto closed = effective_params(base, period, q);
    const auto quad = em::effective_params_quadrature(base, period, q);
    CHECK(rel_gap(closed.alpha_hat, quad.alpha_hat) < 1e-8);
    CHECK(std::abs(closed.rho_hat - quad.rho_hat) < 1e-10);
    CHECK(rel_gap(closed.nu_hat, quad.nu_hat) < 1e-8);
  };
  check({0.5, 1.0}, {1.0});    // reference forward-start configuration
  check({-0.25, 0.25}, {2.0});  // seasoned branch
  check({0.0, 0.5}, {0.25});   // boundary tau0 = 0
}

TEST_CASE("full double quadrature agrees with the closed-v path") {
  em::QuadratureOptions nested;
  nested.full_double_quadrature = true;
  nested.abs_tol = 1e-10;  // nested integration is costly; looser budget
  const AccrualPeriod period{0.25, 0.75};
  const auto fast = em::effective_params_quadrature(base, period, {1.0});
  const auto slow = em::effective_params_quadrature(base, period, {1.0}, nested);
  CHECK(rel_gap(fast.alpha_hat, slow.alpha_hat) < 1e-7);
  CHECK(std::abs(fast.rho_hat - slow.rho_hat) < 1e-7);
  CHECK(rel_gap(fast.nu_hat, slow.nu_hat) < 1e-7);
}

TEST_CASE("quadrature self-consistency under panel refinement") {
  em::QuadratureOptions coarse, fine;
  coarse.min_panels = 4;
  fine.min_panels = 8;
  for (const auto& period : {AccrualPeriod{0.5, 1.0}, AccrualPeriod{-0.3, 0.2}}) {
    const auto a = em::effective_params_quadrature(base, period, {1.3}, coarse);
    const auto b = em::effective_params_quadrature(base, period, {1.3}, fine);
    CHECK(std::abs(a.alpha_hat - b.alpha_hat) < 1e-10);
    CHECK(std::abs(a.rho_hat - b.rho_hat) < 1e-10);
    CHECK(std::abs(a.nu_hat - b.nu_hat) < 1e-10);
  }
}

TEST_CASE("nu = 0 degenerates cleanly") {
  SabrParams p = base;
  p.nu = 0.0;
  const auto e = em::effective_params_quadrature(p, {0.5, 1.0}, {1.0});
  CHECK(e.nu_hat == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e.rho_hat == 0.0);  // b/sqrt(c) is 0/0; defined as 0 when c <= 0
  const auto closed = effective_params(p, {0.5, 1.0}, {1.0});
  CHECK(rel_gap(e.alpha_hat, closed.alpha_hat) < 1e-8);
}

TEST_CASE("domain errors outside [0, tau1]") {
  CHECK_THROWS(em::v(-0.1, base, {0.5, 1.0}, {1.0}));
  CHECK_THROWS(em::v(1.1, base, {0.5, 1.0}, {1.0}));
  CHECK_THROWS(em::w(2.0, base, {0.5, 1.0}, {1.0}));
}
