#include "tpp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "tpp/checkpoint.hpp"
#include "tpp/csv.hpp"
#include "tpp/errors.hpp"
#include "tpp/history.hpp"
#include "tpp/mlp.hpp"
#include "tpp/plot.hpp"

namespace tpp {

namespace {

std::filesystem::path checkpoint_file(const std::filesystem::path& dir,
                                      long epoch) {
  return dir / ("checkpoint_" + std::to_string(epoch) + ".bin");
}

std::filesystem::path adam_state_file(const std::filesystem::path& dir,
                                      long epoch) {
  return dir / ("optimizer_" + std::to_string(epoch) + ".bin");
}

/// Baseline: plain Adam on L1 + L2. One step is one epoch and one internal
/// iteration; rows carry the losses at the freshly stepped point.
TrainResult run_adam_baseline(const ExperimentConfig& cfg, const Loss& l1,
                              const Loss& l2, const ParamVector& x0,
                              const HistorySink& sink) {
  TrainResult out;
  out.params = x0;
  out.theta_final = std::numeric_limits<double>::quiet_NaN();
  if (cfg.budget <= 0) return out;

  Adam opt(cfg.adam, x0.size());
  ParamVector grad = zeros_like(x0);
  double v1 = l1.add_gradient(out.params, 1.0, grad);
  double v2 = l2.add_gradient(out.params, 1.0, grad);
  if (!std::isfinite(v1) || !std::isfinite(v2))
    throw NumericalError("non-finite loss at the initial parameters (L1=" +
                         format_double(v1) + ", L2=" + format_double(v2) + ")");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (long it = 1; it <= cfg.budget; ++it) {
    opt.step(grad, out.params);
    std::fill(grad.values.begin(), grad.values.end(), 0.0);
    v1 = l1.add_gradient(out.params, 1.0, grad);
    v2 = l2.add_gradient(out.params, 1.0, grad);
    if (!std::isfinite(v1) || !std::isfinite(v2))
      throw NumericalError("non-finite loss in adam baseline at iteration " +
                           std::to_string(it) + " (L1=" + format_double(v1) +
                           ", L2=" + format_double(v2) + ")");
    HistoryRecord rec;
    rec.internal_iter = it;
    rec.epoch = it;
    rec.phase = "adam";
    rec.l1 = v1;
    rec.l2 = v2;
    rec.sum = v1 + v2;
    rec.phi = nan;
    rec.theta = nan;
    rec.cond_ok = true;
    out.history.push_back(rec);
    if (sink) sink(rec);
    out.internal_iterations = it;
    out.epochs_completed = it;
    if (cfg.checkpoint_interval > 0 && it % cfg.checkpoint_interval == 0) {
      save_checkpoint(checkpoint_file(cfg.out_dir, it), out.params);
      save_adam_state(adam_state_file(cfg.out_dir, it), opt);
    }
  }
  save_adam_state(adam_state_file(cfg.out_dir, cfg.budget), opt);
  return out;
}

} // namespace

void ExperimentConfig::validate() const {
  if (problem != "burgers" && problem != "heat")
    throw ConfigError("unknown problem: " + problem);
  if (hidden_layers < 1) throw ConfigError("hidden_layers must be positive");
  if (hidden_width < 1) throw ConfigError("hidden_width must be positive");
  if (n_data < 1) throw ConfigError("data_points must be positive");
  if (n_collocation < 1)
    throw ConfigError("collocation_points must be positive");
  if (budget < 0) throw ConfigError("budget must be non-negative");
  if (checkpoint_interval < 0)
    throw ConfigError("checkpoint_interval must be non-negative");
  if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
  adam.validate();
  if (method == Method::TwoPhase) {
    IRConfig effective = ir;
    effective.budget = budget;
    effective.adam = adam;
    effective.validate();
  }
}

double rel_l2_error(const std::vector<double>& predicted,
                    const std::vector<double>& reference) {
  if (predicted.size() != reference.size())
    throw ConfigError("rel_l2_error: length mismatch");
  if (predicted.empty()) throw ConfigError("rel_l2_error: empty input");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - reference[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  if (den == 0.0)
    throw NumericalError("relative L2 error undefined: zero-norm reference");
  return std::sqrt(num / den);
}

long oscillation_count(const std::vector<double>& series) {
  long count = 0;
  for (std::size_t k = 0; k + 1 < series.size(); ++k)
    if (series[k + 1] > series[k] + 1e-12 * std::abs(series[k])) ++count;
  return count;
}

std::vector<double> adam_loss_series(
    const std::vector<HistoryRecord>& history) {
  std::vector<double> series;
  for (const auto& rec : history)
    if (rec.phase == "adam") series.push_back(rec.sum);
  return series;
}

std::vector<double> accepted_phi_series(const std::vector<EpochRecord>& epochs,
                                        bool satisfied_only) {
  std::vector<double> series;
  for (const auto& e : epochs) {
    if (satisfied_only && !(e.restoration_ok && e.optimization_ok)) continue;
    series.push_back(e.phi_next);
  }
  return series;
}

long accepted_phi_violations(const std::vector<EpochRecord>& epochs) {
  long count = 0;
  for (const auto& e : epochs) {
    if (!(e.restoration_ok && e.optimization_ok)) continue;
    if (e.phi_next > penalty_phi(e.l1x, e.l2x, e.theta_next)) ++count;
  }
  return count;
}

ErrorReport evaluate_error_report(
    const Problem& problem,
    const std::function<double(double, double)>& predictor, int grid_points) {
  if (!predictor) throw ConfigError("predictor required");
  if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
  if (!problem.reference)
    throw ConfigError("problem has no reference solution");
  ErrorReport report;
  const Domain& dom = problem.domain;
  for (double t : problem.report_slices) {
    std::vector<double> pred, ref;
    pred.reserve(grid_points);
    ref.reserve(grid_points);
    bool masked = false;
    for (int i = 0; i < grid_points; ++i) {
      const double x =
          dom.x_min + (dom.x_max - dom.x_min) * i / (grid_points - 1);
      if (problem.shock && t >= problem.shock->t_start &&
          std::abs(x - problem.shock->x_center) < problem.shock->half_width) {
        masked = true;
        continue;
      }
      pred.push_back(predictor(t, x));
      ref.push_back(problem.reference(t, x));
    }
    report.slices.push_back({t, rel_l2_error(pred, ref), masked});
  }
  return report;
}

void write_error_report_csv(const std::filesystem::path& path,
                            const ErrorReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ConfigError("cannot open error report: " + path.string());
  out << "t,rel_l2_error,shock_mask\n";
  for (const auto& s : report.slices)
    out << format_double(s.t) << ',' << format_double(s.rel_l2) << ','
        << (s.shock_masked ? '1' : '0') << '\n';
  if (!out) throw ConfigError("write to error report failed");
}

void write_slices_csv(const std::filesystem::path& path, const Problem& problem,
                      const std::function<double(double, double)>& predictor,
                      int grid_points) {
  if (!predictor) throw ConfigError("predictor required");
  if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open slices file: " + path.string());
  out << "t,x,u_pred,u_ref\n";
  const Domain& dom = problem.domain;
  for (double t : problem.report_slices) {
    for (int i = 0; i < grid_points; ++i) {
      const double x =
          dom.x_min + (dom.x_max - dom.x_min) * i / (grid_points - 1);
      out << format_double(t) << ',' << format_double(x) << ','
          << format_double(predictor(t, x)) << ','
          << format_double(problem.reference(t, x)) << '\n';
    }
  }
  if (!out) throw ConfigError("write to slices file failed");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem problem = make_problem(cfg.problem);
  std::filesystem::create_directories(cfg.out_dir);

  const Mlp net(MLPConfig::uniform_hidden(cfg.hidden_layers, cfg.hidden_width));
  const ParamVector x0 = net.init_params(cfg.seed);

  std::mt19937_64 rng_colloc(cfg.seed + 1);
  const std::vector<Point> colloc =
      lhs_sample(cfg.n_collocation, problem.domain, rng_colloc);
  std::mt19937_64 rng_data(cfg.seed + 2);
  const std::vector<DataPoint> data = problem.make_data(cfg.n_data, rng_data);

  const MseULoss mse_u(net, data);
  const MseFLoss mse_f(net, problem.residual, problem.residual_partials,
                       colloc);
  const Loss& l1 =
      cfg.l1_is_residual ? static_cast<const Loss&>(mse_f) : mse_u;
  const Loss& l2 =
      cfg.l1_is_residual ? static_cast<const Loss&>(mse_u) : mse_f;

  HistoryCsvWriter history_csv(cfg.out_dir / "history.csv");
  const HistorySink sink = [&](const HistoryRecord& rec) {
    history_csv.write(rec);
  };

  ExperimentResult result;
  if (cfg.method == Method::TwoPhase) {
    IRConfig ir = cfg.ir;
    ir.budget = cfg.budget;
    ir.adam = cfg.adam;
    TwoPhaseTrainer trainer(l1, l2, ir);
    const EpochCallback on_epoch = [&](long k, const ParamVector& p) {
      const long done = k + 1;
      if (cfg.checkpoint_interval > 0 && done % cfg.checkpoint_interval == 0)
        save_checkpoint(checkpoint_file(cfg.out_dir, done), p);
    };
    result.train = trainer.run(x0, sink, on_epoch);
    write_epochs_csv(cfg.out_dir / "epochs.csv", result.train.epochs);
  } else {
    result.train = run_adam_baseline(cfg, l1, l2, x0, sink);
  }

  save_checkpoint(checkpoint_file(cfg.out_dir, result.train.epochs_completed),
                  result.train.params);

  result.final_l1 = l1.value(result.train.params);
  result.final_l2 = l2.value(result.train.params);

  const auto predictor = [&](double t, double x) {
    return net.forward(result.train.params, t, x);
  };
  result.errors = evaluate_error_report(problem, predictor, cfg.grid_points);
  write_error_report_csv(cfg.out_dir / "errors.csv", result.errors);
  write_slices_csv(cfg.out_dir / "slices.csv", problem, predictor,
                   cfg.grid_points);
  if (cfg.emit_plots) {
    write_loss_svg(cfg.out_dir / "loss.svg", result.train.history);
    write_slices_svg(cfg.out_dir / "slices.svg", problem, predictor,
                     cfg.grid_points);
  }
  return result;
}

} // namespace tpp
