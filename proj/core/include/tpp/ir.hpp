#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tpp/adam.hpp"
#include "tpp/losses.hpp"

namespace tpp {

/// Coefficient in front of L2(x^k) in the sufficient-decrease machinery.
/// Mixed keeps the historical asymmetry: the acceptance tests use (1-r)^2
/// while the penalty-weight formula uses (1-r^2). The other two apply one
/// form everywhere, for ablation.
enum class ForcingVariant { Mixed, Squared, Complement };

struct IRConfig {
  double r = 0.99;
  double theta0 = 0.8;
  int it_max = 150;
  double alpha = 0.5; ///< phase-2 weight on L1
  double beta = 4.0;  ///< phase-2 weight on L2
  long budget = 20000;
  ForcingVariant forcing = ForcingVariant::Mixed;
  double theta_min = 1e-8;
  AdamConfig adam;
  bool reset_adam_each_phase = false;

  void validate() const;
};

/// Penalty value theta * l1 + (1 - theta) * l2.
double penalty_phi(double l1, double l2, double theta);

/// (1-r)^2 or (1-r^2) depending on the variant and the call site.
/// `weight_formula` distinguishes the penalty-weight numerator from the
/// acceptance tests.
double forcing_coefficient(const IRConfig& cfg, bool weight_formula);

/// Keeps theta_k when the restoration point already gives the required
/// penalty decrease; otherwise returns the weight making the decrease hold
/// with equality, clamped to [theta_min, theta_k].
double update_theta(double l1x, double l2x, double l1y, double l2y,
                    double theta_k, const IRConfig& cfg);

struct PhaseReport {
  int iterations_used = 0;
  bool condition_satisfied = false;
  double l1 = 0.0;
  double l2 = 0.0;
  double phi = 0.0;
};

/// One inner optimizer step. Restoration rows carry phi at theta_k,
/// optimization rows at theta_{k+1}; cond_ok is that step's acceptance test.
struct HistoryRecord {
  long internal_iter = 0; ///< 1-based across the whole run
  long epoch = 0;         ///< outer index k the step belongs to
  std::string phase;      ///< "restoration" | "optimization" | "adam"
  double l1 = 0.0;
  double l2 = 0.0;
  double sum = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  bool cond_ok = false;
};

/// Loss bookkeeping of one completed outer iteration.
struct EpochRecord {
  long epoch = 0;
  double l1x = 0.0, l2x = 0.0; ///< at x^k
  double l1y = 0.0, l2y = 0.0; ///< at y^k
  double theta_prev = 0.0, theta_next = 0.0;
  double l1_next = 0.0, l2_next = 0.0, phi_next = 0.0; ///< at x^{k+1}
  bool restoration_ok = false;
  bool optimization_ok = false;
  int restoration_iters = 0;
  int optimization_iters = 0;
};

struct TrainResult {
  ParamVector params;
  std::vector<HistoryRecord> history;
  std::vector<EpochRecord> epochs;
  long internal_iterations = 0;
  long epochs_completed = 0;
  double theta_final = 0.0;
};

using HistorySink = std::function<void(const HistoryRecord&)>;
using EpochCallback = std::function<void(long epoch, const ParamVector& params)>;

/// Two-phase trainer: a restoration phase pulls L2 down by factor r, a
/// penalty-weight update keeps theta non-increasing, an optimization phase
/// descends on alpha*L1 + beta*L2 until the joint acceptance tests hold.
/// Phases run inner Adam steps; each step is one internal iteration. The
/// budget is checked between phases, so a run uses at most budget + it_max
/// internal iterations.
class TwoPhaseTrainer {
public:
  TwoPhaseTrainer(const Loss& l1, const Loss& l2, IRConfig cfg);

  /// `sink` streams every history row as it is produced; `on_epoch` fires
  /// after each completed outer iteration with the accepted parameters.
  TrainResult run(const ParamVector& x0, const HistorySink& sink = nullptr,
                  const EpochCallback& on_epoch = nullptr);

private:
  struct PhaseOutcome {
    ParamVector point;
    PhaseReport report;
  };

  PhaseOutcome restoration_phase(const ParamVector& x, double l1x, double l2x,
                                 double theta_k, long epoch, Adam& opt,
                                 TrainResult& out, const HistorySink& sink) const;
  PhaseOutcome optimization_phase(const ParamVector& y, double l1y, double l2y,
                                  double l1x, double l2x, double theta_next,
                                  long epoch, Adam& opt, TrainResult& out,
                                  const HistorySink& sink) const;

  const Loss* l1_;
  const Loss* l2_;
  IRConfig cfg_;
};

} // namespace tpp
