#pragma once

#include <functional>
#include <vector>

#include "tpp/mlp.hpp"

namespace tpp {

struct Point {
  double t = 0.0;
  double x = 0.0;
};

struct DataPoint {
  double t = 0.0;
  double x = 0.0;
  double target = 0.0;
};

/// Scalar objective of the network parameters. Implementations keep their
/// point sets fixed; they are not thread safe (shared evaluation scratch).
class Loss {
public:
  virtual ~Loss() = default;

  virtual double value(const ParamVector& params) const = 0;

  /// Adds scale * d(value)/d(params) into `grad` and returns the value.
  virtual double add_gradient(const ParamVector& params, double scale,
                              ParamVector& grad) const = 0;
};

/// Mean squared data misfit: (1/N) sum_i (u(t_i, x_i) - target_i)^2.
class MseULoss : public Loss {
public:
  MseULoss(const Mlp& net, std::vector<DataPoint> points);

  double value(const ParamVector& params) const override;
  double add_gradient(const ParamVector& params, double scale,
                      ParamVector& grad) const override;

  const std::vector<DataPoint>& points() const { return points_; }

private:
  const Mlp* net_;
  std::vector<DataPoint> points_;
  mutable Mlp::Workspace ws_;
};

/// r(jet) for one collocation point.
using ResidualFn = std::function<double(const Jet2&)>;
/// Partials of r packed as {dr/du, dr/du_t, dr/du_x, dr/du_xx}.
using ResidualPartialsFn = std::function<Jet2(const Jet2&)>;

/// Mean squared PDE residual: (1/N) sum_i r(jet_i)^2.
class MseFLoss : public Loss {
public:
  MseFLoss(const Mlp& net, ResidualFn residual, ResidualPartialsFn partials,
           std::vector<Point> points);

  double value(const ParamVector& params) const override;
  double add_gradient(const ParamVector& params, double scale,
                      ParamVector& grad) const override;

  const std::vector<Point>& points() const { return points_; }

private:
  const Mlp* net_;
  ResidualFn residual_;
  ResidualPartialsFn partials_;
  std::vector<Point> points_;
  mutable Mlp::Workspace ws_;
};

/// c_a * a + c_b * b over the same parameter vector.
class WeightedSumLoss : public Loss {
public:
  WeightedSumLoss(const Loss& a, double c_a, const Loss& b, double c_b);

  double value(const ParamVector& params) const override;
  double add_gradient(const ParamVector& params, double scale,
                      ParamVector& grad) const override;

private:
  const Loss* a_;
  const Loss* b_;
  double c_a_;
  double c_b_;
};

} // namespace tpp
