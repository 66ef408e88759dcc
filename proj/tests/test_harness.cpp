#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ptnlms/harness.hpp"
#include "ptnlms/scenarios.hpp"

using namespace ptnlms;

namespace {

Scenario small_scenario(std::size_t taps = 8, std::size_t horizon = 300) {
  Scenario scn;
  std::vector<double> w_o(taps, 0.0);
  w_o[0] = 1.0;
  if (taps > 3) w_o[3] = -0.5;
  scn.system = UnknownSystem::fixed(w_o);
  scn.input = InputModel::wgn();
  scn.noise_var = 1e-2;
  scn.horizon = horizon;
  scn.trials = 10;
  scn.delta = 1e-12;
  return scn;
}

} // namespace

TEST_CASE("nlms identifies a noiseless static system") {
  Scenario scn = small_scenario(8, 2000);
  scn.noise_var = 0.0;
  const TrialResult r = run_trial(scn, GainRule::identity(), 1.0, 5);
  CHECK_FALSE(r.diverged);
  CHECK(r.squared_error.size() == 2000);
  // reconstruct the final weights to measure the misalignment
  const TrialResult rw = run_trial(scn, GainRule::identity(), 1.0, 5, true);
  const std::vector<double>& w = rw.weights.back();
  double err = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double d = w[i] - scn.system.w_start[i];
    err += d * d;
  }
  CHECK(std::sqrt(err) < 1e-6);
}

TEST_CASE("zero horizon produces an empty curve") {
  Scenario scn = small_scenario();
  scn.horizon = 0;
  const TrialResult r = run_trial(scn, GainRule::identity(), 0.5, 1);
  CHECK(r.squared_error.empty());
  CHECK_FALSE(r.diverged);
}

TEST_CASE("trials are reproducible from their seed") {
  const Scenario scn = small_scenario();
  const TrialResult a = run_trial(scn, GainRule::pnlms(), 0.3, 123, true);
  const TrialResult b = run_trial(scn, GainRule::pnlms(), 0.3, 123, true);
  CHECK(a.squared_error == b.squared_error);
  CHECK(a.weights == b.weights);
  const TrialResult c = run_trial(scn, GainRule::pnlms(), 0.3, 124);
  CHECK(a.squared_error != c.squared_error);
}

TEST_CASE("single-trial monte carlo equals the raw trial") {
  Scenario scn = small_scenario();
  scn.trials = 1;
  const std::vector<Algorithm> algos{{"nlms", GainRule::identity(), 0.5}};
  MonteCarloOptions opts;
  opts.base_seed = 77;
  const auto curves = run_monte_carlo(scn, algos, opts);
  const TrialResult r = run_trial(scn, GainRule::identity(), 0.5, 77);
  CHECK(curves.size() == 1);
  CHECK(curves[0].mse == r.squared_error);
}

TEST_CASE("every algorithm sees the identical signal realizations") {
  Scenario scn = small_scenario();
  scn.trials = 4;
  const std::vector<Algorithm> algos{
      {"a", GainRule::identity(), 0.5},
      {"b", GainRule::identity(), 0.5},
  };
  const auto curves = run_monte_carlo(scn, algos);
  CHECK(curves[0].mse == curves[1].mse); // bitwise
}

TEST_CASE("curve length equals the horizon for every algorithm") {
  Scenario scn = small_scenario(8, 123);
  scn.trials = 3;
  const std::vector<Algorithm> algos{
      {"nlms", GainRule::identity(), 0.5},
      {"pnlms", GainRule::pnlms(), 0.3},
      {"ipnlms", GainRule::ipnlms(), 0.4},
      {"l0nlms", GainRule::l0_nlms(), 0.9},
  };
  const auto curves = run_monte_carlo(scn, algos);
  for (const auto& c : curves) {
    CHECK(c.mse.size() == 123);
    for (double v : c.mse) {
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("thread count does not change the averaged curves") {
  Scenario scn = small_scenario(8, 64);
  scn.trials = 37; // deliberately not a multiple of the block size
  const std::vector<Algorithm> algos{
      {"nlms", GainRule::identity(), 0.5},
      {"l0nlms", GainRule::l0_nlms(), 0.9},
  };
  MonteCarloOptions serial;
  serial.threads = 1;
  MonteCarloOptions parallel;
  parallel.threads = 4;
  const auto a = run_monte_carlo(scn, algos, serial);
  const auto b = run_monte_carlo(scn, algos, parallel);
  for (std::size_t i = 0; i < algos.size(); ++i) CHECK(a[i].mse == b[i].mse);
}

TEST_CASE("doubling the trial count only perturbs the steady state slightly") {
  Scenario scn = small_scenario(16, 400);
  scn.trials = 100;
  const std::vector<Algorithm> algos{{"nlms", GainRule::identity(), 0.5}};
  const auto few = run_monte_carlo(scn, algos);
  scn.trials = 200;
  const auto many = run_monte_carlo(scn, algos);
  const double a = steady_state_mse(few[0].mse);
  const double b = steady_state_mse(many[0].mse);
  CHECK(std::abs(a - b) / b < 0.2);
}

TEST_CASE("diverged trials are flagged and abort the averaged run") {
  Scenario scn = small_scenario();
  scn.noise_var = std::numeric_limits<double>::infinity();
  const TrialResult r = run_trial(scn, GainRule::identity(), 0.5, 1);
  CHECK(r.diverged);
  CHECK(r.diverged_at == 0);

  const std::vector<Algorithm> algos{{"nlms", GainRule::identity(), 0.5}};
  CHECK_THROWS_AS(run_monte_carlo(scn, algos), DivergenceError);
}

TEST_CASE("steady_state_mse windows") {
  const std::vector<double> constant(50, 0.25);
  CHECK(steady_state_mse(constant) == doctest::Approx(0.25));
  CHECK(steady_state_mse(constant, 7) == doctest::Approx(0.25));
  CHECK_THROWS_AS(steady_state_mse(constant, 51), std::invalid_argument);
  CHECK_THROWS_AS(steady_state_mse(std::vector<double>{}),
                  std::invalid_argument);

  std::vector<double> tail(100, 1.0);
  for (std::size_t k = 90; k < 100; ++k) tail[k] = 0.5;
  CHECK(steady_state_mse(tail) == doctest::Approx(0.5)); // last 10%
}

TEST_CASE("time_to_threshold: edges and debounce") {
  SUBCASE("already below at the start") {
    const std::vector<double> curve(10, 0.001);
    CHECK(time_to_threshold(curve, 0.01) == 0);
  }

  SUBCASE("never settles") {
    const std::vector<double> curve(10, 1.0);
    CHECK_FALSE(time_to_threshold(curve, 0.01).has_value());
  }

  SUBCASE("matches a naive scan on monotone curves") {
    std::mt19937_64 eng(19);
    std::uniform_real_distribution<double> factor(0.93, 0.999);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> curve(400);
      double v = 1.0;
      for (double& c : curve) {
        v *= factor(eng);
        c = v;
      }
      const double level = 0.05;
      std::size_t naive = curve.size();
      for (std::size_t k = 0; k < curve.size(); ++k) {
        if (curve[k] <= level) {
          naive = k;
          break;
        }
      }
      const auto got = time_to_threshold(curve, level);
      if (naive == curve.size()) {
        CHECK_FALSE(got.has_value());
      } else {
        REQUIRE(got.has_value());
        CHECK(*got == naive);
      }
    }
  }

  SUBCASE("a transient dip below the level does not count") {
    std::vector<double> curve(200, 1.0);
    curve[20] = 0.001; // single-sample noise dip
    for (std::size_t k = 100; k < 200; ++k) curve[k] = 0.001;
    const auto got = time_to_threshold(curve, 0.01);
    REQUIRE(got.has_value());
    CHECK(*got == 100);
  }
}

TEST_CASE("benchmark ordering invariants at reduced trial counts") {
  const double level = from_db(-17.0);
  const auto tt_of = [&](const LearningCurve& c, std::size_t lo,
                         std::size_t len) {
    const auto tt = time_to_threshold(
        std::span<const double>(c.mse).subspan(lo, len), level);
    return tt ? static_cast<double>(*tt)
              : std::numeric_limits<double>::infinity();
  };
  MonteCarloOptions opts;
  opts.base_seed = 1;

  SUBCASE("zero init: sparsity-aware rules are no slower than nlms") {
    RunPreset p = make_preset("fig2a");
    p.scenario.trials = 100;
    const auto curves = run_monte_carlo(p.scenario, p.algorithms, opts);
    const double nlms = tt_of(curves[0], 0, curves[0].mse.size());
    CHECK(std::isfinite(nlms));
    for (int a : {1, 2, 3})
      CHECK(tt_of(curves[a], 0, curves[a].mse.size()) <= nlms);
    // normalized algorithms settle near the noise floor
    const double ss = steady_state_mse(curves[0].mse);
    CHECK(ss >= 1e-2);
    CHECK(ss <= 4e-2);
  }

  SUBCASE("biased init: attractor settles first") {
    RunPreset p = make_preset("fig2b");
    p.scenario.trials = 100;
    const auto curves = run_monte_carlo(p.scenario, p.algorithms, opts);
    const double l0 = tt_of(curves[3], 0, curves[3].mse.size());
    CHECK(std::isfinite(l0));
    CHECK(tt_of(curves[1], 0, curves[1].mse.size()) >= l0);
    CHECK(tt_of(curves[2], 0, curves[2].mse.size()) >= l0);
  }

  SUBCASE("support switch: attractor tracks faster than pnlms afterwards") {
    RunPreset p = make_preset("fig2c");
    p.scenario.trials = 100;
    const auto curves = run_monte_carlo(p.scenario, p.algorithms, opts);
    const double l0 = tt_of(curves[3], 2000, 2000);
    CHECK(std::isfinite(l0));
    CHECK(tt_of(curves[1], 2000, 2000) > l0);
  }
}

TEST_CASE("scenario validation") {
  Scenario scn = small_scenario();
  scn.horizon = 0;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
  scn = small_scenario();
  scn.trials = 0;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
  scn = small_scenario();
  scn.init.assign(3, 0.0); // wrong length
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
  scn = small_scenario();
  scn.delta = -1.0;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
  scn = small_scenario();
  CHECK_NOTHROW(scn.validate());
}
