#include "uclab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "uclab/torus_field.hpp"

namespace uclab {

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = mid - half * z;
    rule.nodes[hi] = mid + half * z;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const double pim4 = std::pow(kPi, -0.25);
  const int m = (order + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Asymptotic initial guesses for the largest roots first.
    if (i == 0) {
      z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * order) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    // rule.nodes holds descending positive roots during construction.
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
  }
  QuadratureRule sorted;
  sorted.nodes.resize(static_cast<std::size_t>(order));
  sorted.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < m; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto lo = ui;
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    sorted.nodes[lo] = -rule.nodes[ui];
    sorted.nodes[hi] = rule.nodes[ui];
    sorted.weights[lo] = rule.weights[ui];
    sorted.weights[hi] = rule.weights[ui];
  }
  if (order % 2 == 1) sorted.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return sorted;
}

}  // namespace uclab
