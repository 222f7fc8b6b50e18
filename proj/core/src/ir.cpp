#include "tpp/ir.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tpp {

namespace {

void check_finite(double l1, double l2, const char* phase, long epoch, int iter) {
  if (std::isfinite(l1) && std::isfinite(l2)) return;
  std::ostringstream msg;
  msg << phase << " phase diverged at epoch " << epoch << ", inner iteration " << iter
      << " (L1 = " << l1 << ", L2 = " << l2 << ")";
  throw NumericalError(msg.str());
}

} // namespace

void IRConfig::validate() const {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("ir: r must be in (0,1)");
  if (!(theta0 > 0.0 && theta0 < 1.0)) throw ConfigError("ir: theta0 must be in (0,1)");
  if (it_max < 1) throw ConfigError("ir: it_max must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("ir: alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("ir: beta must be positive");
  if (budget < 0) throw ConfigError("ir: budget must not be negative");
  if (!(theta_min > 0.0 && theta_min < theta0))
    throw ConfigError("ir: theta_min must be in (0, theta0)");
  adam.validate();
}

double penalty_phi(double l1, double l2, double theta) {
  return theta * l1 + (1.0 - theta) * l2;
}

double forcing_coefficient(const IRConfig& cfg, bool weight_formula) {
  switch (cfg.forcing) {
    case ForcingVariant::Squared: return (1.0 - cfg.r) * (1.0 - cfg.r);
    case ForcingVariant::Complement: return 1.0 - cfg.r * cfg.r;
    case ForcingVariant::Mixed:
    default:
      return weight_formula ? 1.0 - cfg.r * cfg.r : (1.0 - cfg.r) * (1.0 - cfg.r);
  }
}

double update_theta(double l1x, double l2x, double l1y, double l2y,
                    double theta_k, const IRConfig& cfg) {
  const double decrease = 0.5 * forcing_coefficient(cfg, false) * l2x;
  if (penalty_phi(l1y, l2y, theta_k) <= penalty_phi(l1x, l2x, theta_k) - decrease)
    return theta_k;

  const double den = l1y - l1x + l2x - l2y;
  if (std::abs(den) <= cfg.theta_min) return theta_k;
  const double num = 0.5 * forcing_coefficient(cfg, true) * l2x + cfg.r * l2x - l2y;
  return std::clamp(num / den, cfg.theta_min, theta_k);
}

TwoPhaseTrainer::TwoPhaseTrainer(const Loss& l1, const Loss& l2, IRConfig cfg)
    : l1_(&l1), l2_(&l2), cfg_(std::move(cfg)) {
  cfg_.validate();
}

TwoPhaseTrainer::PhaseOutcome TwoPhaseTrainer::restoration_phase(
    const ParamVector& x, double l1x, double l2x, double theta_k, long epoch,
    Adam& opt, TrainResult& out, const HistorySink& sink) const {
  PhaseOutcome best{x, {0, true, l1x, l2x, penalty_phi(l1x, l2x, theta_k)}};
  if (l2x == 0.0) return best;

  const double target = cfg_.r * l2x;
  best.report.condition_satisfied = false;
  ParamVector y = x;
  ParamVector grad = zeros_like(x);
  l2_->add_gradient(y, 1.0, grad);

  for (int it = 1; it <= cfg_.it_max; ++it) {
    opt.step(grad, y);

    // One pass gives the stepped point's value and the next direction.
    std::fill(grad.values.begin(), grad.values.end(), 0.0);
    const double l2y = l2_->add_gradient(y, 1.0, grad);
    const double l1y = l1_->value(y);
    check_finite(l1y, l2y, "restoration", epoch, it);
    const bool ok = l2y <= target;

    ++out.internal_iterations;
    HistoryRecord rec{out.internal_iterations, epoch,          "restoration", l1y, l2y,
                      l1y + l2y,               penalty_phi(l1y, l2y, theta_k), theta_k, ok};
    if (sink) sink(rec);
    out.history.push_back(std::move(rec));

    if (ok) return {std::move(y), {it, true, l1y, l2y, penalty_phi(l1y, l2y, theta_k)}};
    if (l2y < best.report.l2) {
      best.point = y;
      best.report = {it, false, l1y, l2y, penalty_phi(l1y, l2y, theta_k)};
    }
  }
  best.report.iterations_used = cfg_.it_max;
  return best;
}

TwoPhaseTrainer::PhaseOutcome TwoPhaseTrainer::optimization_phase(
    const ParamVector& y, double l1y, double l2y, double l1x, double l2x,
    double theta_next, long epoch, Adam& opt, TrainResult& out,
    const HistorySink& sink) const {
  const double decrease = 0.5 * forcing_coefficient(cfg_, false) * l2x;
  const double phi_bound = penalty_phi(l1x, l2x, theta_next) - decrease;

  // y is the d = 0 fallback if no inner step improves the penalty.
  PhaseOutcome best{y, {0, false, l1y, l2y, penalty_phi(l1y, l2y, theta_next)}};
  ParamVector z = y;
  ParamVector grad = zeros_like(y);
  l1_->add_gradient(z, cfg_.alpha, grad);
  l2_->add_gradient(z, cfg_.beta, grad);

  for (int it = 1; it <= cfg_.it_max; ++it) {
    opt.step(grad, z);

    std::fill(grad.values.begin(), grad.values.end(), 0.0);
    const double l1z = l1_->add_gradient(z, cfg_.alpha, grad);
    const double l2z = l2_->add_gradient(z, cfg_.beta, grad);
    check_finite(l1z, l2z, "optimization", epoch, it);
    const double phi_z = penalty_phi(l1z, l2z, theta_next);
    const bool ok = l1z <= l1y && phi_z <= phi_bound;

    ++out.internal_iterations;
    HistoryRecord rec{out.internal_iterations, epoch, "optimization", l1z, l2z,
                      l1z + l2z,               phi_z, theta_next,     ok};
    if (sink) sink(rec);
    out.history.push_back(std::move(rec));

    if (ok) return {std::move(z), {it, true, l1z, l2z, phi_z}};
    if (phi_z < best.report.phi) {
      best.point = z;
      best.report = {it, false, l1z, l2z, phi_z};
    }
  }
  best.report.iterations_used = cfg_.it_max;
  return best;
}

TrainResult TwoPhaseTrainer::run(const ParamVector& x0, const HistorySink& sink,
                                 const EpochCallback& on_epoch) {
  TrainResult out;
  out.params = x0;
  out.theta_final = cfg_.theta0;

  Adam adam_restore(cfg_.adam, x0.size());
  Adam adam_optimize(cfg_.adam, x0.size());

  double theta = cfg_.theta0;
  double l1x = l1_->value(out.params);
  double l2x = l2_->value(out.params);
  check_finite(l1x, l2x, "initial", 0, 0);

  for (long k = 0; out.internal_iterations < cfg_.budget; ++k) {
    if (cfg_.reset_adam_each_phase) adam_restore.reset();
    PhaseOutcome rest = restoration_phase(out.params, l1x, l2x, theta, k,
                                          adam_restore, out, sink);
    if (out.internal_iterations >= cfg_.budget) {
      out.params = std::move(rest.point);
      break;
    }

    const double theta_next =
        update_theta(l1x, l2x, rest.report.l1, rest.report.l2, theta, cfg_);

    if (cfg_.reset_adam_each_phase) adam_optimize.reset();
    PhaseOutcome opt = optimization_phase(rest.point, rest.report.l1, rest.report.l2,
                                          l1x, l2x, theta_next, k, adam_optimize,
                                          out, sink);

    EpochRecord er;
    er.epoch = k;
    er.l1x = l1x;
    er.l2x = l2x;
    er.l1y = rest.report.l1;
    er.l2y = rest.report.l2;
    er.theta_prev = theta;
    er.theta_next = theta_next;
    er.l1_next = opt.report.l1;
    er.l2_next = opt.report.l2;
    er.phi_next = opt.report.phi;
    er.restoration_ok = rest.report.condition_satisfied;
    er.optimization_ok = opt.report.condition_satisfied;
    er.restoration_iters = rest.report.iterations_used;
    er.optimization_iters = opt.report.iterations_used;
    out.epochs.push_back(er);

    out.params = std::move(opt.point);
    l1x = opt.report.l1;
    l2x = opt.report.l2;
    theta = theta_next;
    out.epochs_completed = k + 1;
    out.theta_final = theta;
    if (on_epoch) on_epoch(k, out.params);
  }
  return out;
}

} // namespace tpp
