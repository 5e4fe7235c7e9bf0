#pragma once

#include <vector>

namespace airy {

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points on [-1, 1]; exact for polynomials of
// degree 2n-1. Nodes are Newton-refined roots of the Legendre polynomial.
QuadratureRule gauss_legendre(int n);

// The same rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

} // namespace airy
