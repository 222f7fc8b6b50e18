#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tpp/checkpoint.hpp"
#include "tpp/config.hpp"
#include "tpp/csv.hpp"
#include "tpp/errors.hpp"
#include "tpp/harness.hpp"
#include "tpp/plot.hpp"
#include "tpp/problems.hpp"

namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultConfig = "configs/presets.ini";
constexpr const char* kPresetList =
    "burgers-adam, burgers-ir-1, burgers-ir-2, heat-adam, heat-ir-1, "
    "heat-ir-2, heat-desk-adam, heat-desk-ir, burgers-desk-adam, "
    "burgers-desk-ir";

struct CommonFlags {
  std::string config;
  std::string preset;
  std::string problem;
  std::string method;
  std::string out_dir;
  long budget = 0;
  std::uint64_t seed = 0;
  bool plots = false;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

tpp::PresetFile load_config(const std::string& config_flag) {
  const std::string path = config_flag.empty() ? kDefaultConfig : config_flag;
  return tpp::PresetFile::parse(path);
}

tpp::ExperimentSpec assemble_spec(const CommonFlags& f) {
  tpp::ExperimentSpec spec;
  if (!f.config.empty() || !f.preset.empty()) {
    const tpp::PresetFile file = load_config(f.config);
    const tpp::PresetSection* section = nullptr;
    if (!f.preset.empty()) {
      section = file.find(f.preset);
      if (!section)
        throw tpp::ConfigError("no preset named '" + f.preset +
                               "' (available: " + [&] {
                                 std::string names;
                                 for (const auto& n : file.names()) {
                                   if (!names.empty()) names += ", ";
                                   names += n;
                                 }
                                 return names;
                               }() + ")");
    } else if (file.sections.size() == 1) {
      section = &file.sections.front().second;
    } else {
      throw tpp::ConfigError(
          "config file defines " + std::to_string(file.sections.size()) +
          " presets; pick one with --preset");
    }
    spec.apply(*section);
  }
  if (!f.problem.empty()) spec.set("problem", f.problem);
  if (!f.method.empty()) spec.set("method", f.method);
  if (f.budget_opt && f.budget_opt->count() > 0)
    spec.set("budget", std::to_string(f.budget));
  if (f.seed_opt && f.seed_opt->count() > 0)
    spec.set("seed", std::to_string(f.seed));
  if (!f.out_dir.empty()) spec.set("out_dir", f.out_dir);
  if (f.plots) spec.set("plots", "true");
  return spec;
}

void print_summary(const tpp::ExperimentResult& result) {
  std::cout << "epochs=" << result.train.epochs_completed
            << " internal_iterations=" << result.train.internal_iterations
            << " L1=" << tpp::format_double(result.final_l1)
            << " L2=" << tpp::format_double(result.final_l2)
            << " theta=" << tpp::format_double(result.train.theta_final)
            << '\n';
  for (const auto& s : result.errors.slices)
    std::cout << "t=" << tpp::format_double(s.t)
              << " rel_l2_error=" << tpp::format_double(s.rel_l2)
              << (s.shock_masked ? " (shock region excluded)" : "") << '\n';
}

int cmd_train(const CommonFlags& f) {
  tpp::ExperimentSpec spec = assemble_spec(f);
  spec.finalize();
  const tpp::ExperimentResult result = tpp::run_experiment(spec.cfg);
  print_summary(result);
  return 0;
}

int cmd_evaluate(const std::string& checkpoint, const std::string& problem_name,
                 const std::string& out_dir, int grid_points, bool plots) {
  const tpp::ParamVector params = tpp::load_checkpoint(checkpoint);
  tpp::MLPConfig net_cfg;
  net_cfg.widths = params.widths;
  const tpp::Mlp net(net_cfg);
  const tpp::Problem problem = tpp::make_problem(problem_name);
  fs::create_directories(out_dir);
  const auto predictor = [&](double t, double x) {
    return net.forward(params, t, x);
  };
  const tpp::ErrorReport report =
      tpp::evaluate_error_report(problem, predictor, grid_points);
  tpp::write_error_report_csv(fs::path(out_dir) / "errors.csv", report);
  tpp::write_slices_csv(fs::path(out_dir) / "slices.csv", problem, predictor,
                        grid_points);
  if (plots)
    tpp::write_slices_svg(fs::path(out_dir) / "slices.svg", problem, predictor,
                          grid_points);
  for (const auto& s : report.slices)
    std::cout << "t=" << tpp::format_double(s.t)
              << " rel_l2_error=" << tpp::format_double(s.rel_l2)
              << (s.shock_masked ? " (shock region excluded)" : "") << '\n';
  return 0;
}

int cmd_compare(const CommonFlags& f, const std::vector<std::string>& presets) {
  if (presets.size() < 2)
    throw tpp::ConfigError("compare needs at least two --preset entries");
  const tpp::PresetFile file = load_config(f.config);
  const std::string out_root = f.out_dir.empty() ? "out" : f.out_dir;

  std::vector<std::pair<std::string, tpp::ExperimentSpec>> specs;
  for (const auto& name : presets) {
    const tpp::PresetSection* section = file.find(name);
    if (!section) throw tpp::ConfigError("no preset named '" + name + "'");
    tpp::ExperimentSpec spec;
    spec.apply(*section);
    if (f.budget_opt && f.budget_opt->count() > 0)
      spec.set("budget", std::to_string(f.budget));
    if (f.seed_opt && f.seed_opt->count() > 0)
      spec.set("seed", std::to_string(f.seed));
    if (f.plots) spec.set("plots", "true");
    spec.set("out_dir", (fs::path(out_root) / name).string());
    spec.finalize();
    specs.emplace_back(name, std::move(spec));
  }
  for (std::size_t i = 1; i < specs.size(); ++i) {
    if (specs[i].second.cfg.problem != specs.front().second.cfg.problem)
      throw tpp::ConfigError("compare runs must share one problem");
    if (specs[i].second.cfg.budget != specs.front().second.cfg.budget)
      throw tpp::ConfigError(
          "compare runs must share one budget; align them with --budget");
  }

  fs::create_directories(out_root);
  const fs::path csv_path = fs::path(out_root) / "compare.csv";
  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv)
    throw tpp::ConfigError("cannot open compare file: " + csv_path.string());
  csv << "method,slice,rel_l2_error,oscillation_count\n";

  for (const auto& [name, spec] : specs) {
    const tpp::ExperimentResult result = tpp::run_experiment(spec.cfg);
    // Upward moves of each method's own merit: the baseline's summed loss
    // between steps, the two-phase trainer's penalty across accepted steps
    // (measured at the weight in force for the epoch).
    const long osc =
        spec.cfg.method == tpp::Method::TwoPhase
            ? tpp::accepted_phi_violations(result.train.epochs)
            : tpp::oscillation_count(
                  tpp::adam_loss_series(result.train.history));
    for (const auto& s : result.errors.slices)
      csv << name << ',' << tpp::format_double(s.t) << ','
          << tpp::format_double(s.rel_l2) << ',' << osc << '\n';
    csv.flush();
  }
  if (!csv) throw tpp::ConfigError("write to compare file failed");
  std::cout << "wrote " << csv_path.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Physics-informed network training: plain Adam baseline and a "
      "two-phase trainer that alternates a feasibility-restoration phase "
      "with a penalty-guarded optimization phase."};
  app.require_subcommand(1);
  app.footer(std::string("Presets shipped in configs/presets.ini: ") +
             kPresetList);

  CommonFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Run one training experiment");
  train->add_option("--config", train_flags.config,
                    "Config file (default: configs/presets.ini when --preset "
                    "is given)");
  train->add_option("--preset", train_flags.preset,
                    "Preset section to apply from the config file");
  train->add_option("--problem", train_flags.problem, "burgers | heat");
  train->add_option("--method", train_flags.method, "adam | two-phase");
  train_flags.budget_opt = train->add_option(
      "--budget", train_flags.budget, "Internal-iteration budget");
  train_flags.seed_opt =
      train->add_option("--seed", train_flags.seed, "Base RNG seed");
  train->add_option("--out", train_flags.out_dir, "Output directory");
  train->add_flag("--plots", train_flags.plots, "Also write SVG plots");

  std::string eval_checkpoint, eval_problem, eval_out = "out";
  int eval_grid = 256;
  bool eval_plots = false;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score a saved checkpoint against the reference solution");
  evaluate->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")
      ->required();
  evaluate->add_option("--problem", eval_problem, "burgers | heat")
      ->required();
  evaluate->add_option("--out", eval_out, "Output directory");
  evaluate->add_option("--grid", eval_grid, "x-grid points per slice");
  evaluate->add_flag("--plots", eval_plots, "Also write SVG plots");

  CommonFlags compare_flags;
  std::vector<std::string> compare_presets;
  CLI::App* compare = app.add_subcommand(
      "compare", "Run several presets at equal budgets and tabulate errors");
  compare->add_option("--config", compare_flags.config,
                      "Config file (default: configs/presets.ini)");
  compare
      ->add_option("--preset", compare_presets,
                   "Preset to include (repeat or comma-separate)")
      ->delimiter(',');
  compare_flags.budget_opt = compare->add_option(
      "--budget", compare_flags.budget, "Budget override applied to all runs");
  compare_flags.seed_opt =
      compare->add_option("--seed", compare_flags.seed, "Base RNG seed");
  compare->add_option("--out", compare_flags.out_dir,
                      "Output root (per-run artifacts in subdirectories)");
  compare->add_flag("--plots", compare_flags.plots, "Also write SVG plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(train)) return cmd_train(train_flags);
    if (app.got_subcommand(evaluate))
      return cmd_evaluate(eval_checkpoint, eval_problem, eval_out, eval_grid,
                          eval_plots);
    if (app.got_subcommand(compare))
      return cmd_compare(compare_flags, compare_presets);
  } catch (const tpp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
