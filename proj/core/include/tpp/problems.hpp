#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tpp/losses.hpp"

namespace tpp {

struct Domain {
  double t_min = 0.0;
  double t_max = 1.0;
  double x_min = -1.0;
  double x_max = 1.0;
};

/// Latin hypercube sample: one point per stratum in each dimension, strata
/// paired by independent random permutations. Deterministic in rng state.
std::vector<Point> lhs_sample(int n, const Domain& domain, std::mt19937_64& rng);

/// Evaluation slices past `t_start` skip |x - x_center| <= half_width when
/// scoring against the reference (steep front dominates the error there).
struct ShockExclusion {
  double t_start = 0.0;
  double x_center = 0.0;
  double half_width = 0.0;
};

/// One benchmark PDE: geometry, residual, analytic reference and the
/// supervised data generator for its initial/boundary conditions.
struct Problem {
  std::string name;
  Domain domain;
  double coefficient = 0.0; ///< viscosity nu, or conductivity k
  ResidualFn residual;
  ResidualPartialsFn residual_partials;
  std::vector<double> report_slices; ///< t values for error reports
  std::optional<ShockExclusion> shock;

  std::vector<DataPoint> (*make_data)(int n_u, std::mt19937_64& rng) = nullptr;
  double (*reference)(double t, double x) = nullptr;
};

/// u_t + u u_x - nu u_xx on t in [0,1], x in [-1,1], u(0,x) = -sin(pi x),
/// zero boundaries, nu = 0.01/pi.
Problem make_burgers_problem();

/// u_t - k u_xx on t in [0,5], x in [0,10], k = 1,
/// u(0,x) = sin(pi x/10) + sin(3 pi x/10), zero boundaries.
Problem make_heat_problem();

Problem make_problem(const std::string& name);

/// Supervised points, n_u/4 per boundary and the rest on the initial line.
std::vector<DataPoint> burgers_data(int n_u, std::mt19937_64& rng);
std::vector<DataPoint> heat_data(int n_u, std::mt19937_64& rng);

/// Cole-Hopf solution of the viscous Burgers problem above, evaluated with
/// Gauss-Hermite quadrature (n_nodes controls accuracy; 200 is plenty for
/// nu = 0.01/pi). t <= 0 returns the initial condition.
double reference_burgers(double t, double x, double nu, int n_nodes);
double reference_burgers(double t, double x);

/// Two-mode separable solution of the heat problem above.
double reference_heat(double t, double x);

} // namespace tpp
