#include "fvlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fvlab {

QuadratureRule QuadratureRule::gauss_legendre(int p) {
  if (p < 1 || p > 64) throw std::invalid_argument("gauss_legendre: order must be in [1,64]");
  QuadratureRule rule;
  rule.order = p;
  rule.nodes.resize(static_cast<std::size_t>(p));
  rule.weights.resize(static_cast<std::size_t>(p));

  // Roots of P_p on [-1,1] by Newton iteration, then mapped to [-1/2,1/2].
  for (int i = 0; i < p; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (p + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (p == 1) p1 = x;  // P_1
      for (int k = 2; k <= p; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = p * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root for the weight.
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= p; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = p * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map to [-1/2,1/2]; halving the weights makes them sum to 1.
    rule.nodes[static_cast<std::size_t>(p - 1 - i)] = 0.5 * x;
    rule.weights[static_cast<std::size_t>(p - 1 - i)] = 0.5 * w;
  }
  return rule;
}

}  // namespace fvlab
