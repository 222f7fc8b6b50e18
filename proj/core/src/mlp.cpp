#include "tpp/mlp.hpp"

#include <cmath>
#include <sstream>

#include "tpp/rng.hpp"

namespace tpp {

void MLPConfig::validate() const {
  if (widths.size() < 3)
    throw ConfigError("MLPConfig: need input, at least one hidden and an output layer");
  if (widths.front() != 2)
    throw ConfigError("MLPConfig: input width must be 2 for (t, x)");
  if (widths.back() != 1)
    throw ConfigError("MLPConfig: output width must be 1");
  for (int w : widths)
    if (w < 1) throw ConfigError("MLPConfig: widths must be positive");
}

MLPConfig MLPConfig::uniform_hidden(int hidden_layers, int hidden_width,
                                    Activation act) {
  MLPConfig cfg;
  cfg.widths.push_back(2);
  for (int i = 0; i < hidden_layers; ++i) cfg.widths.push_back(hidden_width);
  cfg.widths.push_back(1);
  cfg.hidden_activation = act;
  cfg.validate();
  return cfg;
}

bool ParamVector::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

std::size_t ParamVector::param_count(const std::vector<int>& widths) {
  std::size_t n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l)
    n += static_cast<std::size_t>(widths[l - 1]) * widths[l] + widths[l];
  return n;
}

ParamVector zeros_like(const ParamVector& like) {
  ParamVector out;
  out.widths = like.widths;
  out.values.assign(like.values.size(), 0.0);
  return out;
}

Mlp::Mlp(MLPConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const auto L = cfg_.widths.size() - 1;
  w_off_.resize(L);
  b_off_.resize(L);
  std::size_t off = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t in = cfg_.widths[l];
    const std::size_t out = cfg_.widths[l + 1];
    w_off_[l] = off;
    off += in * out;
    b_off_[l] = off;
    off += out;
  }
  n_params_ = off;
}

ParamVector Mlp::init_params(std::uint64_t seed) const {
  ParamVector p;
  p.widths = cfg_.widths;
  p.values.assign(n_params_, 0.0);
  std::mt19937_64 rng(seed);
  for (int l = 0; l < layer_count(); ++l) {
    const int in = cfg_.widths[l];
    const int out = cfg_.widths[l + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    double* w = p.values.data() + w_off_[l];
    for (int i = 0; i < in * out; ++i) w[i] = uniform(rng, -limit, limit);
    // biases stay zero
  }
  return p;
}

Mlp::Workspace Mlp::make_workspace() const {
  Workspace ws;
  const int L = layer_count();
  ws.act.resize(L + 1);
  ws.pre.resize(L);
  int max_w = 0;
  for (int l = 0; l <= L; ++l) {
    ws.act[l].resize(cfg_.widths[l]);
    if (l < L) ws.pre[l].resize(cfg_.widths[l + 1]);
    max_w = std::max(max_w, cfg_.widths[l]);
  }
  ws.adj_in.resize(max_w);
  ws.adj_out.resize(max_w);
  return ws;
}

void Mlp::check_shape(const ParamVector& params) const {
  if (params.widths != cfg_.widths || params.values.size() != n_params_) {
    std::ostringstream msg;
    msg << "parameter vector shape does not match network config (" << params.values.size()
        << " values for " << n_params_ << " parameters)";
    throw ConfigError(msg.str());
  }
}

double Mlp::forward(const ParamVector& params, double t, double x) const {
  // Single code path with forward_jet keeps the bitwise val equality
  // contract; plain evaluation is never on the hot path.
  Workspace ws = make_workspace();
  return forward_jet(params, t, x, ws).val;
}

Jet2 Mlp::forward_jet(const ParamVector& params, double t, double x) const {
  Workspace ws = make_workspace();
  return forward_jet(params, t, x, ws);
}

namespace {

inline Jet2 tanh_jet(const Jet2& z) {
  const double s = std::tanh(z.val);
  const double g = 1.0 - s * s;
  Jet2 r;
  r.val = s;
  r.d_t = g * z.d_t;
  r.d_x = g * z.d_x;
  r.d_xx = g * z.d_xx - 2.0 * s * g * z.d_x * z.d_x;
  return r;
}

} // namespace

Jet2 Mlp::forward_jet(const ParamVector& params, double t, double x,
                      Workspace& ws) const {
  check_shape(params);
  const int L = layer_count();

  ws.act[0][0] = Jet2{t, 1.0, 0.0, 0.0};
  ws.act[0][1] = Jet2{x, 0.0, 1.0, 0.0};

  for (int l = 0; l < L; ++l) {
    const int in = cfg_.widths[l];
    const int out = cfg_.widths[l + 1];
    const double* w = params.values.data() + w_off_[l];
    const double* b = params.values.data() + b_off_[l];
    const std::vector<Jet2>& a = ws.act[l];
    std::vector<Jet2>& z = ws.pre[l];
    for (int i = 0; i < out; ++i) {
      Jet2 acc{b[i], 0.0, 0.0, 0.0};
      const double* wi = w + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) {
        acc.val += wi[j] * a[j].val;
        acc.d_t += wi[j] * a[j].d_t;
        acc.d_x += wi[j] * a[j].d_x;
        acc.d_xx += wi[j] * a[j].d_xx;
      }
      z[i] = acc;
    }
    const bool hidden = l + 1 < L;
    std::vector<Jet2>& s = ws.act[l + 1];
    if (hidden && cfg_.hidden_activation == Activation::Tanh) {
      for (int i = 0; i < out; ++i) s[i] = tanh_jet(z[i]);
    } else {
      for (int i = 0; i < out; ++i) s[i] = z[i];
    }
  }
  return ws.act[L][0];
}

void Mlp::accumulate_jet_gradient(const ParamVector& params, Workspace& ws,
                                  const Jet2& seed, ParamVector& grad) const {
  check_shape(params);
  check_shape(grad);
  const int L = layer_count();

  // Adjoint of the output layer's pre-activation jet (output is linear).
  std::vector<Jet2>& adj = ws.adj_in;
  std::vector<Jet2>& adj_prev = ws.adj_out;
  adj[0] = seed;

  for (int l = L - 1; l >= 0; --l) {
    const int in = cfg_.widths[l];
    const int out = cfg_.widths[l + 1];
    const double* w = params.values.data() + w_off_[l];
    double* gw = grad.values.data() + w_off_[l];
    double* gb = grad.values.data() + b_off_[l];
    const std::vector<Jet2>& a = ws.act[l];

    for (int i = 0; i < out; ++i) {
      const Jet2& zi = adj[i];
      double* gwi = gw + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) {
        gwi[j] += zi.val * a[j].val + zi.d_t * a[j].d_t + zi.d_x * a[j].d_x +
                  zi.d_xx * a[j].d_xx;
      }
      gb[i] += zi.val;
    }
    if (l == 0) break;

    // Adjoint of this layer's inputs (post-activation of layer l-1).
    for (int j = 0; j < in; ++j) {
      Jet2 acc{};
      for (int i = 0; i < out; ++i) {
        const double wij = w[static_cast<std::size_t>(i) * in + j];
        acc.val += wij * adj[i].val;
        acc.d_t += wij * adj[i].d_t;
        acc.d_x += wij * adj[i].d_x;
        acc.d_xx += wij * adj[i].d_xx;
      }
      adj_prev[j] = acc;
    }

    // Through the activation of layer l-1.
    if (cfg_.hidden_activation == Activation::Tanh) {
      const std::vector<Jet2>& z = ws.pre[l - 1];
      const std::vector<Jet2>& s = ws.act[l];
      for (int j = 0; j < in; ++j) {
        const double sigma = s[j].val;
        const double g = 1.0 - sigma * sigma;
        const Jet2& zj = z[j];
        const Jet2& sa = adj_prev[j];
        Jet2 za;
        za.d_xx = g * sa.d_xx;
        za.d_x = g * sa.d_x - 4.0 * sigma * g * zj.d_x * sa.d_xx;
        za.d_t = g * sa.d_t;
        za.val = g * sa.val - 2.0 * sigma * g * (zj.d_t * sa.d_t + zj.d_x * sa.d_x) +
                 g * (-2.0 * sigma * zj.d_xx - 2.0 * (g - 2.0 * sigma * sigma) * zj.d_x * zj.d_x) *
                     sa.d_xx;
        adj[j] = za;
      }
    } else {
      for (int j = 0; j < in; ++j) adj[j] = adj_prev[j];
    }
  }
}

} // namespace tpp
