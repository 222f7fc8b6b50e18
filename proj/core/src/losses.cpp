#include "tpp/losses.hpp"

#include <utility>

namespace tpp {

MseULoss::MseULoss(const Mlp& net, std::vector<DataPoint> points)
    : net_(&net), points_(std::move(points)), ws_(net.make_workspace()) {
  if (points_.empty()) throw ConfigError("MseULoss: empty point set");
}

double MseULoss::value(const ParamVector& params) const {
  double acc = 0.0;
  for (const DataPoint& p : points_) {
    const double e = net_->forward_jet(params, p.t, p.x, ws_).val - p.target;
    acc += e * e;
  }
  return acc / static_cast<double>(points_.size());
}

double MseULoss::add_gradient(const ParamVector& params, double scale,
                              ParamVector& grad) const {
  const double n = static_cast<double>(points_.size());
  double acc = 0.0;
  for (const DataPoint& p : points_) {
    const double e = net_->forward_jet(params, p.t, p.x, ws_).val - p.target;
    acc += e * e;
    const Jet2 seed{scale * 2.0 * e / n, 0.0, 0.0, 0.0};
    net_->accumulate_jet_gradient(params, ws_, seed, grad);
  }
  return acc / n;
}

MseFLoss::MseFLoss(const Mlp& net, ResidualFn residual, ResidualPartialsFn partials,
                   std::vector<Point> points)
    : net_(&net),
      residual_(std::move(residual)),
      partials_(std::move(partials)),
      points_(std::move(points)),
      ws_(net.make_workspace()) {
  if (points_.empty()) throw ConfigError("MseFLoss: empty point set");
  if (!residual_ || !partials_) throw ConfigError("MseFLoss: missing residual functions");
}

double MseFLoss::value(const ParamVector& params) const {
  double acc = 0.0;
  for (const Point& p : points_) {
    const double r = residual_(net_->forward_jet(params, p.t, p.x, ws_));
    acc += r * r;
  }
  return acc / static_cast<double>(points_.size());
}

double MseFLoss::add_gradient(const ParamVector& params, double scale,
                              ParamVector& grad) const {
  const double n = static_cast<double>(points_.size());
  double acc = 0.0;
  for (const Point& p : points_) {
    const Jet2 jet = net_->forward_jet(params, p.t, p.x, ws_);
    const double r = residual_(jet);
    acc += r * r;
    const Jet2 d = partials_(jet);
    const double c = scale * 2.0 * r / n;
    const Jet2 seed{c * d.val, c * d.d_t, c * d.d_x, c * d.d_xx};
    net_->accumulate_jet_gradient(params, ws_, seed, grad);
  }
  return acc / n;
}

WeightedSumLoss::WeightedSumLoss(const Loss& a, double c_a, const Loss& b, double c_b)
    : a_(&a), b_(&b), c_a_(c_a), c_b_(c_b) {}

double WeightedSumLoss::value(const ParamVector& params) const {
  return c_a_ * a_->value(params) + c_b_ * b_->value(params);
}

double WeightedSumLoss::add_gradient(const ParamVector& params, double scale,
                                     ParamVector& grad) const {
  const double va = a_->add_gradient(params, scale * c_a_, grad);
  const double vb = b_->add_gradient(params, scale * c_b_, grad);
  return c_a_ * va + c_b_ * vb;
}

} // namespace tpp
