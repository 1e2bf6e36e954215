#include "bsabr/quadrature.hpp"

namespace bsabr {

const GaussLegendre15& GaussLegendre15::instance() {
  static const GaussLegendre15 rule;
  return rule;
}

GaussLegendre15::GaussLegendre15() {
  constexpr int n = static_cast<int>(n_points);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-angle initial guess for the i-th root of P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    node_[i] = x;
    weight_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace bsabr
