#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "tpp/ir.hpp"
#include "tpp/rng.hpp"

using namespace tpp;

namespace {

// Scalar quadratic (p - center)^2 on a one-entry parameter vector.
struct QuadLoss : Loss {
  double center;
  explicit QuadLoss(double c) : center(c) {}
  double value(const ParamVector& p) const override {
    const double d = p.values[0] - center;
    return d * d;
  }
  double add_gradient(const ParamVector& p, double scale, ParamVector& g) const override {
    const double d = p.values[0] - center;
    g.values[0] += scale * 2.0 * d;
    return d * d;
  }
};

struct EventuallyNaN : Loss {
  mutable int calls = 0;
  int threshold;
  explicit EventuallyNaN(int n) : threshold(n) {}
  double value(const ParamVector&) const override {
    return ++calls > threshold ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  }
  double add_gradient(const ParamVector& p, double, ParamVector&) const override {
    return value(p);
  }
};

ParamVector scalar(double v) {
  ParamVector p;
  p.values = {v};
  return p;
}

IRConfig toy_config() {
  IRConfig cfg;
  cfg.r = 0.9;
  cfg.theta0 = 0.8;
  cfg.it_max = 50;
  cfg.alpha = 1.0;
  cfg.beta = 1.0;
  cfg.budget = 5000;
  cfg.adam.learning_rate = 0.01;
  return cfg;
}

double mixed_decrease(const IRConfig& cfg, double l2x) {
  return 0.5 * (1.0 - cfg.r) * (1.0 - cfg.r) * l2x;
}

} // namespace

TEST_CASE("penalty_phi is the convex combination") {
  CHECK(penalty_phi(2.0, 4.0, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(penalty_phi(5.0, 99.0, 0.999999) == doctest::Approx(5.0).epsilon(1e-4));
  for (double theta : {0.1, 0.5, 0.9})
    CHECK(penalty_phi(7.0, 7.0, theta) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("forcing_coefficient per variant and call site") {
  IRConfig cfg;
  cfg.r = 0.99;
  cfg.forcing = ForcingVariant::Mixed;
  CHECK(forcing_coefficient(cfg, false) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(forcing_coefficient(cfg, true) == doctest::Approx(0.0199).epsilon(1e-12));
  cfg.forcing = ForcingVariant::Squared;
  CHECK(forcing_coefficient(cfg, false) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(forcing_coefficient(cfg, true) == doctest::Approx(1e-4).epsilon(1e-12));
  cfg.forcing = ForcingVariant::Complement;
  CHECK(forcing_coefficient(cfg, false) == doctest::Approx(0.0199).epsilon(1e-12));
  CHECK(forcing_coefficient(cfg, true) == doctest::Approx(0.0199).epsilon(1e-12));
}

TEST_CASE("update_theta keeps theta when the decrease test passes") {
  IRConfig cfg;
  cfg.r = 0.99;
  CHECK(update_theta(1.0, 1.0, 0.5, 0.5, 0.8, cfg) == 0.8);
}

TEST_CASE("update_theta solves for the equality weight") {
  IRConfig cfg;
  cfg.r = 0.99;
  const double got = update_theta(1.0, 1.0, 2.0, 0.5, 0.8, cfg);
  CHECK(got == doctest::Approx(0.49995 / 1.5).epsilon(1e-10));
  CHECK(got == doctest::Approx(0.33330).epsilon(1e-4));
}

TEST_CASE("update_theta clamps above at theta_k") {
  IRConfig cfg;
  cfg.r = 0.99;
  // Restoration made L2 worse; the raw weight lands above theta_k.
  CHECK(update_theta(1.0, 1.0, 1.5, 2.0, 0.5, cfg) == 0.5);
}

TEST_CASE("update_theta clamps below at theta_min") {
  IRConfig cfg;
  cfg.r = 0.99;
  // No restoration progress and a big L1 increase: raw weight is negative.
  CHECK(update_theta(0.0, 1.0, 10.0, 1.0, 0.8, cfg) == cfg.theta_min);
}

TEST_CASE("update_theta guards a vanishing denominator") {
  IRConfig cfg;
  cfg.r = 0.99;
  CHECK(update_theta(1.0, 1.0, 1.0, 1.0, 0.7, cfg) == 0.7);
}

TEST_CASE("update_theta never leaves [theta_min, theta_k]") {
  for (ForcingVariant variant :
       {ForcingVariant::Mixed, ForcingVariant::Squared, ForcingVariant::Complement}) {
    IRConfig cfg;
    cfg.r = 0.95;
    cfg.forcing = variant;
    std::mt19937_64 rng(42);
    for (int i = 0; i < 2000; ++i) {
      const double l1x = uniform(rng, 0.0, 2.0);
      const double l2x = uniform(rng, 0.0, 2.0);
      const double l1y = uniform(rng, 0.0, 2.0);
      const double l2y = uniform(rng, 0.0, 2.0);
      const double theta_k = uniform(rng, 0.05, 0.95);
      const double next = update_theta(l1x, l2x, l1y, l2y, theta_k, cfg);
      CHECK(next <= theta_k);
      CHECK(next >= cfg.theta_min);
    }
  }
}

TEST_CASE("toy run drives the feasibility loss to zero") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  TwoPhaseTrainer trainer(l1, l2, toy_config());
  const TrainResult res = trainer.run(scalar(0.5));

  CHECK(res.internal_iterations <= toy_config().budget + toy_config().it_max);
  CHECK(res.epochs_completed > 0);
  CHECK(l2.value(res.params) < 1e-4);
}

TEST_CASE("toy run satisfies the logged-loss invariants") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  const IRConfig cfg = toy_config();
  TwoPhaseTrainer trainer(l1, l2, cfg);
  const TrainResult res = trainer.run(scalar(0.5));

  REQUIRE(!res.epochs.empty());
  long phase_iters = 0;
  for (const EpochRecord& er : res.epochs) {
    CHECK(er.theta_next <= er.theta_prev);
    CHECK(er.theta_next >= cfg.theta_min);
    CHECK(er.theta_next < 1.0);
    if (er.restoration_ok && er.restoration_iters > 0) CHECK(er.l2y <= cfg.r * er.l2x);
    if (er.optimization_ok) {
      CHECK(er.l1_next <= er.l1y);
      CHECK(er.phi_next <=
            penalty_phi(er.l1x, er.l2x, er.theta_next) - mixed_decrease(cfg, er.l2x));
    }
    phase_iters += er.restoration_iters + er.optimization_iters;
  }
  CHECK(static_cast<long>(res.history.size()) == res.internal_iterations);

  // Rows beyond the completed epochs belong to one budget-truncated phase.
  long completed_rows = 0;
  for (const HistoryRecord& row : res.history)
    if (row.epoch < res.epochs_completed) ++completed_rows;
  CHECK(phase_iters == completed_rows);
  for (std::size_t i = completed_rows; i < res.history.size(); ++i)
    CHECK(res.history[i].epoch == res.epochs_completed);
}

TEST_CASE("budget smaller than the first phase truncates the run") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  IRConfig cfg = toy_config();
  cfg.budget = 3;
  TwoPhaseTrainer trainer(l1, l2, cfg);
  const TrainResult res = trainer.run(scalar(2.0));

  CHECK(res.epochs_completed == 0);
  CHECK(res.epochs.empty());
  CHECK(!res.history.empty());
  CHECK(res.internal_iterations >= cfg.budget);
  CHECK(res.internal_iterations <= cfg.budget + cfg.it_max);
  CHECK(res.theta_final == cfg.theta0);
}

TEST_CASE("budget zero gives an empty history") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  IRConfig cfg = toy_config();
  cfg.budget = 0;
  TwoPhaseTrainer trainer(l1, l2, cfg);
  const TrainResult res = trainer.run(scalar(0.5));
  CHECK(res.history.empty());
  CHECK(res.params.values[0] == 0.5);
}

TEST_CASE("zero feasibility loss skips the restoration phase") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  TwoPhaseTrainer trainer(l1, l2, toy_config());
  const TrainResult res = trainer.run(scalar(0.0));

  REQUIRE(!res.epochs.empty());
  CHECK(res.epochs[0].restoration_iters == 0);
  CHECK(res.epochs[0].restoration_ok);
  CHECK(res.epochs[0].l2y == 0.0);
}

TEST_CASE("a restoration failure lowers theta to the equality weight") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  IRConfig cfg = toy_config();
  cfg.theta0 = 0.99;
  TwoPhaseTrainer trainer(l1, l2, cfg);
  const TrainResult res = trainer.run(scalar(1.0));

  REQUIRE(!res.epochs.empty());
  const EpochRecord& e0 = res.epochs[0];
  CHECK(e0.theta_next < e0.theta_prev);
  CHECK(e0.theta_next ==
        update_theta(e0.l1x, e0.l2x, e0.l1y, e0.l2y, e0.theta_prev, cfg));

  for (const HistoryRecord& row : res.history) {
    if (row.epoch != 0) break;
    if (row.phase == "restoration") CHECK(row.theta == e0.theta_prev);
    if (row.phase == "optimization") CHECK(row.theta == e0.theta_next);
  }
}

TEST_CASE("history sink streams every row") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  IRConfig cfg = toy_config();
  cfg.budget = 200;
  TwoPhaseTrainer trainer(l1, l2, cfg);

  std::vector<HistoryRecord> streamed;
  const TrainResult res =
      trainer.run(scalar(0.5), [&](const HistoryRecord& r) { streamed.push_back(r); });
  REQUIRE(streamed.size() == res.history.size());
  for (std::size_t i = 0; i < streamed.size(); ++i) {
    CHECK(streamed[i].internal_iter == res.history[i].internal_iter);
    CHECK(streamed[i].phi == res.history[i].phi);
    CHECK(streamed[i].phase == res.history[i].phase);
  }
  CHECK(streamed.front().internal_iter == 1);
  CHECK(streamed.back().internal_iter == res.internal_iterations);
}

TEST_CASE("identical runs produce identical results") {
  const QuadLoss l1(1.0);
  const QuadLoss l2(0.0);
  IRConfig cfg = toy_config();
  cfg.budget = 500;
  TwoPhaseTrainer a(l1, l2, cfg);
  TwoPhaseTrainer b(l1, l2, cfg);
  const TrainResult ra = a.run(scalar(0.5));
  const TrainResult rb = b.run(scalar(0.5));
  CHECK(ra.params.values == rb.params.values);
  REQUIRE(ra.history.size() == rb.history.size());
  for (std::size_t i = 0; i < ra.history.size(); ++i) {
    CHECK(ra.history[i].l1 == rb.history[i].l1);
    CHECK(ra.history[i].phi == rb.history[i].phi);
  }
}

TEST_CASE("non-finite losses raise a numerical error") {
  const EventuallyNaN bad_now(0);
  const QuadLoss l2(0.0);
  TwoPhaseTrainer t1(bad_now, l2, toy_config());
  CHECK_THROWS_AS(t1.run(scalar(0.5)), NumericalError);

  const EventuallyNaN bad_soon(2);
  TwoPhaseTrainer t2(bad_soon, l2, toy_config());
  CHECK_THROWS_AS(t2.run(scalar(0.5)), NumericalError);
}

TEST_CASE("config validation") {
  IRConfig cfg = toy_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.r = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.theta0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.it_max = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.budget = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
