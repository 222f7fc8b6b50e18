#pragma once

#include <cstddef>
#include <vector>

#include "tpp/mlp.hpp"

namespace tpp {

struct AdamConfig {
  double learning_rate = 0.0005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Adam with bias correction. One instance owns the moment estimates for
/// one parameter vector; step order fully determines the trajectory.
class Adam {
public:
  Adam(AdamConfig cfg, std::size_t n_params);

  /// params -= lr * m_hat / (sqrt(v_hat) + epsilon).
  void step(const ParamVector& grad, ParamVector& params);

  void reset();

  long step_count() const { return t_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

  /// Restores a serialized (m, v, step_count) triple.
  void restore(std::vector<double> m, std::vector<double> v, long step_count);

private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

} // namespace tpp
