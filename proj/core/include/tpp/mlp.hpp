#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tpp/errors.hpp"

namespace tpp {

enum class Activation {
  Tanh,     ///< hyperbolic tangent on hidden layers (the trained setting)
  Identity, ///< linear hidden layers; test hook for affine networks
};

/// Fully connected network shape: input width 2 for (t, x), one output.
struct MLPConfig {
  std::vector<int> widths; ///< input, hidden..., output
  Activation hidden_activation = Activation::Tanh;

  /// Throws ConfigError unless widths = [2, h1.., 1] with at least one
  /// hidden layer and all widths positive.
  void validate() const;

  static MLPConfig uniform_hidden(int hidden_layers, int hidden_width,
                                  Activation act = Activation::Tanh);
};

/// Value and input derivatives of one network scalar:
/// (u, du/dt, du/dx, d2u/dx2).
struct Jet2 {
  double val = 0.0;
  double d_t = 0.0;
  double d_x = 0.0;
  double d_xx = 0.0;
};

/// Flat parameter storage plus the layer-width list it was built for.
/// Layout per layer l: weight matrix row-major [out][in], then biases [out];
/// layers stored in ascending order.
struct ParamVector {
  std::vector<int> widths;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool all_finite() const;

  static std::size_t param_count(const std::vector<int>& widths);
};

/// Same shape as `like`, all entries zero.
ParamVector zeros_like(const ParamVector& like);

/// Feedforward tanh network with a jet-propagating forward pass and a
/// reverse pass for parameter gradients of jet-built losses.
class Mlp {
public:
  explicit Mlp(MLPConfig cfg);

  const MLPConfig& config() const { return cfg_; }
  std::size_t param_count() const { return n_params_; }
  int layer_count() const { return static_cast<int>(cfg_.widths.size()) - 1; }

  /// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
  /// Identical (config, seed) pairs give bit-identical vectors.
  ParamVector init_params(std::uint64_t seed) const;

  /// Scratch buffers for one evaluation; reuse across points.
  /// act[0] holds the seeded input jets, act[l+1] the outputs of layer l;
  /// pre[l] keeps the pre-activation jets needed by the reverse pass.
  struct Workspace {
    std::vector<std::vector<Jet2>> act;
    std::vector<std::vector<Jet2>> pre;
    std::vector<Jet2> adj_in;
    std::vector<Jet2> adj_out;
  };
  Workspace make_workspace() const;

  /// u(t, x). Bitwise equal to forward_jet(...).val.
  double forward(const ParamVector& params, double t, double x) const;

  Jet2 forward_jet(const ParamVector& params, double t, double x) const;
  Jet2 forward_jet(const ParamVector& params, double t, double x,
                   Workspace& ws) const;

  /// Reverse accumulation for the point last evaluated into `ws`:
  /// adds d(seed.val*u + seed.d_t*u_t + seed.d_x*u_x + seed.d_xx*u_xx)/dp
  /// to `grad`. Callers fold any scale factor into the seed. Uses the
  /// workspace adjoint buffers as scratch.
  void accumulate_jet_gradient(const ParamVector& params, Workspace& ws,
                               const Jet2& seed, ParamVector& grad) const;

  std::size_t weight_offset(int layer) const { return w_off_[layer]; }
  std::size_t bias_offset(int layer) const { return b_off_[layer]; }

  /// Throws ConfigError when the vector was built for different widths.
  void check_shape(const ParamVector& params) const;

private:
  MLPConfig cfg_;
  std::vector<std::size_t> w_off_;
  std::vector<std::size_t> b_off_;
  std::size_t n_params_ = 0;
};

} // namespace tpp
