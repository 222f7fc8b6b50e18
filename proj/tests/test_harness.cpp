#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tpp/checkpoint.hpp"
#include "tpp/errors.hpp"
#include "tpp/harness.hpp"
#include "tpp/history.hpp"
#include "tpp/mlp.hpp"
#include "tpp/plot.hpp"
#include "tpp/problems.hpp"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tpp_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

tpp::ExperimentConfig tiny_adam_config(const fs::path& out) {
  tpp::ExperimentConfig cfg;
  cfg.problem = "heat";
  cfg.method = tpp::Method::Adam;
  cfg.hidden_layers = 2;
  cfg.hidden_width = 8;
  cfg.n_data = 16;
  cfg.n_collocation = 64;
  cfg.budget = 30;
  cfg.seed = 11;
  cfg.out_dir = out;
  return cfg;
}

} // namespace

TEST_CASE("rel_l2_error basics") {
  const std::vector<double> ref{1.0, -2.0, 3.0, 0.5};
  CHECK(tpp::rel_l2_error(ref, ref) == 0.0);

  std::vector<double> twice = ref;
  for (double& v : twice) v *= 2.0;
  CHECK(tpp::rel_l2_error(twice, ref) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> shifted = ref;
  for (double& v : shifted) v += 0.1;
  double num = 0.0, den = 0.0;
  for (double v : ref) {
    num += 0.1 * 0.1;
    den += v * v;
  }
  const double expected = std::sqrt(num) / std::sqrt(den);
  CHECK(tpp::rel_l2_error(shifted, ref) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("rel_l2_error rejects degenerate input") {
  CHECK_THROWS_AS(tpp::rel_l2_error({1.0}, {1.0, 2.0}), tpp::ConfigError);
  CHECK_THROWS_AS(tpp::rel_l2_error({}, {}), tpp::ConfigError);
  CHECK_THROWS_AS(tpp::rel_l2_error({1.0, 1.0}, {0.0, 0.0}),
                  tpp::NumericalError);
}

TEST_CASE("oscillation_count definition") {
  CHECK(tpp::oscillation_count({5.0, 4.0, 3.0, 2.0}) == 0);
  CHECK(tpp::oscillation_count({1.0, 2.0, 1.0, 2.0}) == 2);
  CHECK(tpp::oscillation_count({}) == 0);
  CHECK(tpp::oscillation_count({1.0}) == 0);
  CHECK(tpp::oscillation_count({1.0, 1.0 + 1e-13}) == 0);
  CHECK(tpp::oscillation_count({1.0, 1.0 + 1e-11}) == 1);
  CHECK(tpp::oscillation_count({-2.0, -1.0}) == 1);
}

TEST_CASE("series extractors") {
  std::vector<tpp::HistoryRecord> history(3);
  history[0].phase = "adam";
  history[0].sum = 3.0;
  history[1].phase = "restoration";
  history[1].sum = 99.0;
  history[2].phase = "adam";
  history[2].sum = 2.0;
  CHECK(tpp::adam_loss_series(history) == std::vector<double>{3.0, 2.0});

  std::vector<tpp::EpochRecord> epochs(3);
  epochs[0].phi_next = 5.0;
  epochs[0].restoration_ok = true;
  epochs[0].optimization_ok = true;
  epochs[1].phi_next = 4.0;
  epochs[1].restoration_ok = true;
  epochs[1].optimization_ok = false;
  epochs[2].phi_next = 3.0;
  epochs[2].restoration_ok = true;
  epochs[2].optimization_ok = true;
  CHECK(tpp::accepted_phi_series(epochs, false) ==
        std::vector<double>{5.0, 4.0, 3.0});
  CHECK(tpp::accepted_phi_series(epochs, true) ==
        std::vector<double>{5.0, 3.0});
}

TEST_CASE("accepted_phi_violations compares each step at its own weight") {
  // phi at the epoch start is theta_next*l1x + (1-theta_next)*l2x.
  tpp::EpochRecord ok_epoch;
  ok_epoch.l1x = 1.0;
  ok_epoch.l2x = 1.0;
  ok_epoch.theta_next = 0.5;
  ok_epoch.phi_next = 0.9; // below the starting value 1.0
  ok_epoch.restoration_ok = ok_epoch.optimization_ok = true;

  tpp::EpochRecord bad_epoch = ok_epoch;
  bad_epoch.phi_next = 1.1; // above the starting value

  tpp::EpochRecord unsatisfied = bad_epoch;
  unsatisfied.optimization_ok = false; // fallback epochs are not counted

  CHECK(tpp::accepted_phi_violations({ok_epoch}) == 0);
  CHECK(tpp::accepted_phi_violations({ok_epoch, bad_epoch}) == 1);
  CHECK(tpp::accepted_phi_violations({ok_epoch, unsatisfied}) == 0);
  CHECK(tpp::accepted_phi_violations({}) == 0);
}

TEST_CASE("evaluate_error_report with the reference as predictor is exact") {
  for (const char* name : {"heat", "burgers"}) {
    const tpp::Problem problem = tpp::make_problem(name);
    const auto report = tpp::evaluate_error_report(
        problem, [&](double t, double x) { return problem.reference(t, x); },
        64);
    REQUIRE(report.slices.size() == problem.report_slices.size());
    for (const auto& s : report.slices) CHECK(s.rel_l2 == 0.0);
  }
}

TEST_CASE("shock exclusion masks |x| < 0.05 only at the late burgers slice") {
  const tpp::Problem problem = tpp::make_burgers_problem();
  // Garbage strictly inside the excluded band; clean reference elsewhere,
  // including at |x| = 0.05 exactly (grid of 41 points hits +-0.05).
  const auto predictor = [&](double t, double x) {
    if (std::abs(x) < 0.05) return 1e6;
    return problem.reference(t, x);
  };
  const auto report = tpp::evaluate_error_report(problem, predictor, 41);
  REQUIRE(report.slices.size() == 3);
  CHECK(report.slices[0].t == 0.25);
  CHECK(report.slices[0].shock_masked == false);
  CHECK(report.slices[0].rel_l2 > 1.0);
  CHECK(report.slices[1].shock_masked == false);
  CHECK(report.slices[2].t == 0.75);
  CHECK(report.slices[2].shock_masked == true);
  CHECK(report.slices[2].rel_l2 == 0.0);
}

TEST_CASE("history csv writer emits the documented format") {
  const fs::path dir = fresh_dir("history");
  tpp::HistoryRecord rec;
  rec.internal_iter = 1;
  rec.epoch = 0;
  rec.phase = "restoration";
  rec.l1 = 0.5;
  rec.l2 = 0.25;
  rec.sum = 0.75;
  rec.phi = 0.45;
  rec.theta = 0.8;
  rec.cond_ok = true;
  tpp::HistoryRecord rec2;
  rec2.internal_iter = 2;
  rec2.epoch = 2;
  rec2.phase = "adam";
  rec2.l1 = 1.0;
  rec2.l2 = 2.0;
  rec2.sum = 3.0;
  rec2.phi = std::numeric_limits<double>::quiet_NaN();
  rec2.theta = std::numeric_limits<double>::quiet_NaN();
  rec2.cond_ok = false;
  tpp::write_history_csv(dir / "history.csv", {rec, rec2});
  CHECK(slurp(dir / "history.csv") ==
        "internal_iter,epoch,phase,L1,L2,sum,phi,theta,cond_ok\n"
        "1,0,restoration,0.5,0.25,0.75,0.45,0.8,1\n"
        "2,2,adam,1,2,3,nan,nan,0\n");
}

TEST_CASE("checkpoint round trip is bitwise, including special values") {
  const fs::path dir = fresh_dir("checkpoint");
  tpp::ParamVector params;
  params.widths = {2, 3, 1};
  params.values.assign(tpp::ParamVector::param_count(params.widths), 0.0);
  params.values[0] = 0.1;
  params.values[1] = -0.0;
  params.values[2] = std::numeric_limits<double>::infinity();
  params.values[3] = std::numeric_limits<double>::quiet_NaN();
  params.values[4] = 1e-308;
  const fs::path file = dir / "params.bin";
  tpp::save_checkpoint(file, params);

  const tpp::ParamVector loaded = tpp::load_checkpoint(file);
  CHECK(loaded.widths == params.widths);
  REQUIRE(loaded.values.size() == params.values.size());
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    const std::uint64_t a = std::bit_cast<std::uint64_t>(params.values[i]);
    const std::uint64_t b = std::bit_cast<std::uint64_t>(loaded.values[i]);
    CHECK(a == b);
  }
  // Layout: u32 count, 3 x u32 widths, 13 x f64 values.
  CHECK(fs::file_size(file) == 4 + 12 + 8 * 13);
}

TEST_CASE("corrupt checkpoints are rejected") {
  const fs::path dir = fresh_dir("corrupt");
  tpp::ParamVector params;
  params.widths = {2, 2, 1};
  params.values.assign(tpp::ParamVector::param_count(params.widths), 0.5);
  const fs::path file = dir / "params.bin";
  tpp::save_checkpoint(file, params);
  const std::string good = slurp(file);

  const auto write_bytes = [&](const std::string& bytes) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << bytes;
  };

  write_bytes(good.substr(0, good.size() - 3));
  CHECK_THROWS_AS(tpp::load_checkpoint(file), tpp::ConfigError);
  write_bytes(good + "xx");
  CHECK_THROWS_AS(tpp::load_checkpoint(file), tpp::ConfigError);
  std::string zero_width = good;
  zero_width[4] = zero_width[5] = zero_width[6] = zero_width[7] = '\0';
  write_bytes(zero_width);
  CHECK_THROWS_AS(tpp::load_checkpoint(file), tpp::ConfigError);
  write_bytes("");
  CHECK_THROWS_AS(tpp::load_checkpoint(file), tpp::ConfigError);
  CHECK_THROWS_AS(tpp::load_checkpoint(dir / "missing.bin"), tpp::ConfigError);
}

TEST_CASE("adam state file round trip resumes the exact trajectory") {
  const tpp::Mlp net(tpp::MLPConfig::uniform_hidden(2, 4));
  tpp::ParamVector params = net.init_params(3);
  tpp::ParamVector grad = tpp::zeros_like(params);
  for (std::size_t i = 0; i < grad.values.size(); ++i)
    grad.values[i] = 0.01 * static_cast<double>(i % 5) - 0.02;

  tpp::AdamConfig cfg;
  tpp::Adam opt(cfg, params.size());
  tpp::ParamVector reference = params;
  for (int i = 0; i < 7; ++i) opt.step(grad, reference);

  const fs::path dir = fresh_dir("adam_state");
  tpp::save_adam_state(dir / "opt.bin", opt);

  tpp::Adam resumed(cfg, params.size());
  tpp::load_adam_state(dir / "opt.bin", resumed);
  CHECK(resumed.step_count() == opt.step_count());

  tpp::ParamVector a = reference, b = reference;
  opt.step(grad, a);
  resumed.step(grad, b);
  CHECK(a.values == b.values);

  tpp::Adam wrong_size(cfg, params.size() + 1);
  CHECK_THROWS_AS(tpp::load_adam_state(dir / "opt.bin", wrong_size),
                  tpp::ConfigError);
}

TEST_CASE("run_experiment with budget 0 reports the initial network") {
  const fs::path dir = fresh_dir("budget0");
  tpp::ExperimentConfig cfg = tiny_adam_config(dir);
  cfg.budget = 0;
  const tpp::ExperimentResult result = tpp::run_experiment(cfg);

  CHECK(result.train.history.empty());
  CHECK(result.train.epochs_completed == 0);
  CHECK(result.train.internal_iterations == 0);
  REQUIRE(result.errors.slices.size() == 3);
  for (const auto& s : result.errors.slices) {
    CHECK(std::isfinite(s.rel_l2));
    CHECK(s.rel_l2 >= 0.0);
  }
  CHECK(count_lines(slurp(dir / "history.csv")) == 1);

  const tpp::Mlp net(
      tpp::MLPConfig::uniform_hidden(cfg.hidden_layers, cfg.hidden_width));
  const tpp::ParamVector expected = net.init_params(cfg.seed);
  const tpp::ParamVector saved =
      tpp::load_checkpoint(dir / "checkpoint_0.bin");
  CHECK(saved.values == expected.values);
}

TEST_CASE("run_experiment adam writes one row per step and reruns are byte-identical") {
  const fs::path dir1 = fresh_dir("adam_run1");
  const fs::path dir2 = fresh_dir("adam_run2");
  tpp::ExperimentConfig cfg = tiny_adam_config(dir1);
  cfg.checkpoint_interval = 10;
  const tpp::ExperimentResult r1 = tpp::run_experiment(cfg);
  cfg.out_dir = dir2;
  const tpp::ExperimentResult r2 = tpp::run_experiment(cfg);

  CHECK(r1.train.internal_iterations == 30);
  CHECK(r1.train.epochs_completed == 30);
  CHECK(r1.train.history.size() == 30);
  CHECK(count_lines(slurp(dir1 / "history.csv")) == 31);
  for (const auto& rec : r1.train.history) {
    CHECK(rec.phase == "adam");
    CHECK(std::isnan(rec.theta));
    CHECK(std::isnan(rec.phi));
    CHECK(rec.cond_ok);
    CHECK(rec.epoch == rec.internal_iter);
  }

  CHECK(slurp(dir1 / "history.csv") == slurp(dir2 / "history.csv"));
  CHECK(slurp(dir1 / "errors.csv") == slurp(dir2 / "errors.csv"));
  CHECK(slurp(dir1 / "slices.csv") == slurp(dir2 / "slices.csv"));

  CHECK(fs::exists(dir1 / "checkpoint_10.bin"));
  CHECK(fs::exists(dir1 / "checkpoint_20.bin"));
  CHECK(fs::exists(dir1 / "optimizer_30.bin"));
  const tpp::ParamVector saved =
      tpp::load_checkpoint(dir1 / "checkpoint_30.bin");
  CHECK(saved.values == r1.train.params.values);

  // The final losses match an independent recomputation through the nets.
  CHECK(r1.final_l1 == r2.final_l1);
  CHECK(r1.final_l2 == r2.final_l2);
}

TEST_CASE("run_experiment two-phase run satisfies the logged-loss invariants") {
  const fs::path dir = fresh_dir("twophase");
  tpp::ExperimentConfig cfg = tiny_adam_config(dir);
  cfg.method = tpp::Method::TwoPhase;
  cfg.budget = 120;
  cfg.ir.it_max = 15;
  cfg.ir.alpha = 4.0;
  cfg.ir.beta = 1.0;
  const tpp::ExperimentResult result = tpp::run_experiment(cfg);

  CHECK(result.train.internal_iterations ==
        static_cast<long>(result.train.history.size()));
  for (const auto& rec : result.train.history)
    CHECK((rec.phase == "restoration" || rec.phase == "optimization"));
  CHECK(fs::exists(dir / "epochs.csv"));
  CHECK(result.train.epochs_completed > 0);

  CHECK(tpp::accepted_phi_violations(result.train.epochs) == 0);
}

TEST_CASE("run_experiment emits well-formed svg plots on demand") {
  const fs::path dir = fresh_dir("plots");
  tpp::ExperimentConfig cfg = tiny_adam_config(dir);
  cfg.budget = 5;
  cfg.emit_plots = true;
  tpp::run_experiment(cfg);
  const std::string loss = slurp(dir / "loss.svg");
  const std::string slices = slurp(dir / "slices.svg");
  CHECK(loss.rfind("<svg", 0) == 0);
  CHECK(slices.rfind("<svg", 0) == 0);
  CHECK(loss.find("</svg>") != std::string::npos);
  CHECK(slices.find("</svg>") != std::string::npos);
}

TEST_CASE("experiment config validation") {
  tpp::ExperimentConfig cfg;
  cfg.problem = "poisson";
  CHECK_THROWS_AS(cfg.validate(), tpp::ConfigError);
  cfg = tpp::ExperimentConfig{};
  cfg.budget = -1;
  CHECK_THROWS_AS(cfg.validate(), tpp::ConfigError);
  cfg = tpp::ExperimentConfig{};
  cfg.grid_points = 1;
  CHECK_THROWS_AS(cfg.validate(), tpp::ConfigError);
  cfg = tpp::ExperimentConfig{};
  cfg.method = tpp::Method::TwoPhase;
  cfg.ir.theta0 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), tpp::ConfigError);
}
