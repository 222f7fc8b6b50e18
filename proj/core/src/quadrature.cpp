#include "tpp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "tpp/errors.hpp"

namespace tpp {

namespace {

// QL with implicit shifts on a symmetric tridiagonal matrix, accumulating
// only the first row of the eigenvector matrix (all a Gauss rule needs).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>& row0) {
  const int n = static_cast<int>(d.size());
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw NumericalError("gauss_hermite: eigensolver stalled");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = row0[i + 1];
          row0[i + 1] = s * row0[i] + c * f;
          row0[i] = c * row0[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

} // namespace

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw ConfigError("gauss_hermite: need at least one node");

  // Jacobi matrix of the orthonormal Hermite recurrence: zero diagonal,
  // off-diagonal sqrt(j/2); eigenvalues are the nodes, mu0 = sqrt(pi).
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);
  std::vector<double> row0(n, 0.0);
  for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(j / 2.0);
  row0[0] = 1.0;

  tridiag_ql(d, e, row0);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  const double mu0 = std::sqrt(std::numbers::pi);
  GaussHermite q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = d[order[i]];
    q.weights[i] = mu0 * row0[order[i]] * row0[order[i]];
  }

  // The matrix is symmetric under z -> -z; make the output exactly so.
  for (int i = 0; i < n / 2; ++i) {
    const int k = n - 1 - i;
    const double mag = 0.5 * (q.nodes[k] - q.nodes[i]);
    q.nodes[i] = -mag;
    q.nodes[k] = mag;
    const double w = 0.5 * (q.weights[i] + q.weights[k]);
    q.weights[i] = w;
    q.weights[k] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

} // namespace tpp
