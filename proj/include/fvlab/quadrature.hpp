#pragma once

#include <vector>

namespace fvlab {

/// 1D Gauss-Legendre rule on the reference interval [-1/2, 1/2].
/// Weights sum to 1; exact for polynomials of degree <= 2p-1.
struct QuadratureRule {
  int order = 0;  // points
  std::vector<double> nodes;
  std::vector<double> weights;

  static QuadratureRule gauss_legendre(int p);
};

}  // namespace fvlab
