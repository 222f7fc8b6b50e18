#pragma once

#include <vector>

namespace tpp {

/// Nodes and weights for integrating f(z) * exp(-z^2) over the real line.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Eigendecomposition of the Jacobi matrix of the orthonormal Hermite
/// recurrence; exact for polynomials up to degree 2n-1. Nodes come out
/// symmetric and ascending.
GaussHermite gauss_hermite(int n);

} // namespace tpp
