#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tpp/adam.hpp"
#include "tpp/ir.hpp"
#include "tpp/problems.hpp"

namespace tpp {

enum class Method { Adam, TwoPhase };

/// Everything one experiment needs: problem, method, loss-role assignment,
/// network shape, point counts, seeds and output location. The collocation
/// sampler uses seed + 1 and the data generator seed + 2, so runs with
/// different base seeds share nothing.
struct ExperimentConfig {
  std::string problem = "burgers";
  Method method = Method::Adam;
  /// true: L1 is the residual loss, L2 the data loss; false: swapped.
  bool l1_is_residual = true;
  int hidden_layers = 9;
  int hidden_width = 20;
  int n_data = 100;
  int n_collocation = 10000;
  long budget = 20000;
  std::uint64_t seed = 0;
  AdamConfig adam; ///< baseline steps and the inner steps of both phases
  IRConfig ir;     ///< two-phase settings; budget and adam are taken from above
  std::filesystem::path out_dir = "out";
  long checkpoint_interval = 0; ///< epochs between checkpoints; 0 = final only
  int grid_points = 256;
  bool emit_plots = false;

  void validate() const;
};

struct SliceError {
  double t = 0.0;
  double rel_l2 = 0.0;
  bool shock_masked = false; ///< part of the x-grid was excluded
};

struct ErrorReport {
  std::vector<SliceError> slices;
};

struct ExperimentResult {
  TrainResult train;
  ErrorReport errors;
  double final_l1 = 0.0;
  double final_l2 = 0.0;
};

/// ||predicted - reference||_2 / ||reference||_2. Throws NumericalError when
/// the reference has zero norm, ConfigError on shape mismatch.
double rel_l2_error(const std::vector<double>& predicted,
                    const std::vector<double>& reference);

/// Number of upward jumps: indices k with series[k+1] exceeding series[k] by
/// more than a 1e-12 relative margin.
long oscillation_count(const std::vector<double>& series);

/// The sum column of the baseline rows, one entry per Adam epoch.
std::vector<double> adam_loss_series(const std::vector<HistoryRecord>& history);

/// Penalty values at the accepted iterate of each completed epoch, evaluated
/// at that epoch's weight. With satisfied_only, epochs whose phases exhausted
/// their iteration caps without meeting the acceptance tests are skipped.
/// Entries belonging to different epochs are measured at different weights,
/// so this series is for inspection, not for monotonicity claims.
std::vector<double> accepted_phi_series(const std::vector<EpochRecord>& epochs,
                                        bool satisfied_only);

/// Number of satisfied epochs whose accepted iterate increased the penalty
/// function over the epoch's starting point, both measured at the weight in
/// force for that epoch: counts k with Φ(x^{k+1}, θ_{k+1}) > Φ(x^k, θ_{k+1}).
/// The acceptance test guarantees a strict decrease, so any faithful run
/// yields 0; the Adam baseline has no such guarantee (contrast it with
/// oscillation_count of adam_loss_series).
long accepted_phi_violations(const std::vector<EpochRecord>& epochs);

/// Relative L2 error of an arbitrary predictor on a uniform x-grid at the
/// problem's report slices, honouring the problem's shock exclusion.
ErrorReport evaluate_error_report(
    const Problem& problem,
    const std::function<double(double, double)>& predictor, int grid_points);

void write_error_report_csv(const std::filesystem::path& path,
                            const ErrorReport& report);

/// Grid dump of predicted and reference curves (t, x, u_pred, u_ref); shock
/// masking does not apply here, the full curves are written.
void write_slices_csv(const std::filesystem::path& path, const Problem& problem,
                      const std::function<double(double, double)>& predictor,
                      int grid_points);

/// Trains per the config, writes history.csv, errors.csv, slices.csv and
/// checkpoint files under cfg.out_dir (plus loss.svg / slices.svg when
/// plots are enabled) and reports the final losses and slice errors.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace tpp
