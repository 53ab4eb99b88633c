#pragma once

#include <cmath>

#include "ritz/core.hpp"
#include "ritz/errors.hpp"

namespace ritz {

// Nodes and weights of a fixed quadrature rule on some interval [a, b].
struct QuadratureRule {
  Vector nodes;
  Vector weights;

  int size() const { return static_cast<int>(nodes.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += weights(i) * f(nodes(i));
    return acc;
  }
};

// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2m - 1.
//
// Input:  m, the node count (m >= 1).
// Output: ascending nodes (roots of P_m) with their weights
//         w_i = 2 / ((1 - t_i^2) P_m'(t_i)^2).
// Nodes are found by Newton iteration on P_m from the Chebyshev-like
// initial guess cos(pi (i - 1/4) / (m + 1/2)), which converges in a
// handful of steps for every root.
inline QuadratureRule gauss_legendre(int m) {
  if (m < 1) throw Error(ErrorCode::QuadratureTooCoarse, "quadrature size must be at least 1", m);
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double pi = 3.14159265358979323846;
  // Exploit symmetry: compute the upper half and mirror.
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_m(t) and P_m'(t) by the three-term recurrence.
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= m; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (t * p1 - p0) / (t * t - 1.0);
      double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - t * t) * dp * dp);
    rule.nodes(m - 1 - i) = t;
    rule.weights(m - 1 - i) = w;
    rule.nodes(i) = -t;
    rule.weights(i) = w;
  }
  if (m % 2 == 1) rule.nodes(m / 2) = 0.0;  // the central node is exact
  return rule;
}

// The same rule affinely mapped onto [a, b].
inline QuadratureRule gauss_legendre_on(int m, double a, double b) {
  QuadratureRule rule = gauss_legendre(m);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  rule.nodes = (half * rule.nodes.array() + mid).matrix();
  rule.weights *= half;
  return rule;
}

}  // namespace ritz
