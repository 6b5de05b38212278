#pragma once

#include <vector>

namespace uclab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

/// Gauss-Hermite rule for weight exp(-s^2) on the real line. Nodes are exact
/// mirror images: nodes[i] == -nodes[order-1-i].
QuadratureRule gauss_hermite(int order);

}  // namespace uclab
