#include "tpp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "tpp/quadrature.hpp"
#include "tpp/rng.hpp"

namespace tpp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBurgersNu = 0.01 / kPi;
constexpr double kHeatK = 1.0;
constexpr double kHeatL = 10.0;
constexpr int kBurgersQuadNodes = 200;

const GaussHermite& cached_gauss_hermite(int n) {
  static std::map<int, GaussHermite> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite(n)).first;
  return it->second;
}

} // namespace

std::vector<Point> lhs_sample(int n, const Domain& domain, std::mt19937_64& rng) {
  if (n < 1) throw ConfigError("lhs_sample: need at least one point");
  const auto perm_t = random_permutation(n, rng);
  const auto perm_x = random_permutation(n, rng);
  const double cell_t = (domain.t_max - domain.t_min) / n;
  const double cell_x = (domain.x_max - domain.x_min) / n;
  std::vector<Point> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].t = domain.t_min + (perm_t[i] + uniform01(rng)) * cell_t;
    out[i].x = domain.x_min + (perm_x[i] + uniform01(rng)) * cell_x;
  }
  return out;
}

std::vector<DataPoint> burgers_data(int n_u, std::mt19937_64& rng) {
  if (n_u < 1) throw ConfigError("burgers_data: need at least one point");
  const int n_boundary = n_u / 4;
  const int n_initial = n_u - 2 * n_boundary;
  std::vector<DataPoint> out;
  out.reserve(n_u);
  for (int i = 0; i < n_initial; ++i) {
    const double x = uniform(rng, -1.0, 1.0);
    out.push_back({0.0, x, -std::sin(kPi * x)});
  }
  for (int i = 0; i < n_boundary; ++i) out.push_back({uniform(rng, 0.0, 1.0), -1.0, 0.0});
  for (int i = 0; i < n_boundary; ++i) out.push_back({uniform(rng, 0.0, 1.0), 1.0, 0.0});
  return out;
}

std::vector<DataPoint> heat_data(int n_u, std::mt19937_64& rng) {
  if (n_u < 1) throw ConfigError("heat_data: need at least one point");
  const int n_boundary = n_u / 4;
  const int n_initial = n_u - 2 * n_boundary;
  std::vector<DataPoint> out;
  out.reserve(n_u);
  for (int i = 0; i < n_initial; ++i) {
    const double x = uniform(rng, 0.0, kHeatL);
    out.push_back({0.0, x, std::sin(kPi * x / kHeatL) + std::sin(3.0 * kPi * x / kHeatL)});
  }
  for (int i = 0; i < n_boundary; ++i) out.push_back({uniform(rng, 0.0, 5.0), 0.0, 0.0});
  for (int i = 0; i < n_boundary; ++i) out.push_back({uniform(rng, 0.0, 5.0), kHeatL, 0.0});
  return out;
}

double reference_burgers(double t, double x, double nu, int n_nodes) {
  if (t <= 0.0) return -std::sin(kPi * x);
  const GaussHermite& q = cached_gauss_hermite(n_nodes);

  const double scale = 2.0 * std::sqrt(nu * t);
  const int n = static_cast<int>(q.nodes.size());

  // exp arguments reach +-1/(2 pi nu); factor out the max for stability.
  double max_arg = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double y = x - scale * q.nodes[i];
    max_arg = std::max(max_arg, -std::cos(kPi * y) / (2.0 * kPi * nu));
  }

  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = x - scale * q.nodes[i];
    const double f = std::exp(-std::cos(kPi * y) / (2.0 * kPi * nu) - max_arg);
    num -= q.weights[i] * std::sin(kPi * y) * f;
    den += q.weights[i] * f;
  }
  return num / den;
}

double reference_burgers(double t, double x) {
  return reference_burgers(t, x, kBurgersNu, kBurgersQuadNodes);
}

double reference_heat(double t, double x) {
  const double w1 = kPi / kHeatL;
  const double w3 = 3.0 * kPi / kHeatL;
  return std::exp(-kHeatK * w1 * w1 * t) * std::sin(w1 * x) +
         std::exp(-kHeatK * w3 * w3 * t) * std::sin(w3 * x);
}

Problem make_burgers_problem() {
  Problem p;
  p.name = "burgers";
  p.domain = {0.0, 1.0, -1.0, 1.0};
  p.coefficient = kBurgersNu;
  p.residual = [](const Jet2& j) { return j.d_t + j.val * j.d_x - kBurgersNu * j.d_xx; };
  p.residual_partials = [](const Jet2& j) { return Jet2{j.d_x, 1.0, j.val, -kBurgersNu}; };
  p.report_slices = {0.25, 0.5, 0.75};
  p.shock = ShockExclusion{0.75, 0.0, 0.05};
  p.make_data = &burgers_data;
  p.reference = [](double t, double x) { return reference_burgers(t, x); };
  return p;
}

Problem make_heat_problem() {
  Problem p;
  p.name = "heat";
  p.domain = {0.0, 5.0, 0.0, kHeatL};
  p.coefficient = kHeatK;
  p.residual = [](const Jet2& j) { return j.d_t - kHeatK * j.d_xx; };
  p.residual_partials = [](const Jet2&) { return Jet2{0.0, 1.0, 0.0, -kHeatK}; };
  p.report_slices = {1.0, 2.5, 4.0};
  p.make_data = &heat_data;
  p.reference = &reference_heat;
  return p;
}

Problem make_problem(const std::string& name) {
  if (name == "burgers") return make_burgers_problem();
  if (name == "heat") return make_heat_problem();
  throw ConfigError("unknown problem: " + name);
}

} // namespace tpp
