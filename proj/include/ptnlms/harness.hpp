#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptnlms/filters.hpp"
#include "ptnlms/signals.hpp"

namespace ptnlms {

struct Algorithm {
  std::string name;
  GainRule rule;
  double mu = 0.5;
};

/// Full description of one identification experiment. Trial t draws its
/// input and noise streams from seed base_seed + t, so runs are reproducible
/// and every algorithm sees the identical realizations within a trial.
struct Scenario {
  UnknownSystem system;
  InputModel input;
  double noise_var = 1e-2;
  std::size_t horizon = 1000;
  std::size_t trials = 1000;
  std::vector<double> init; // w(0); empty means all zeros
  double delta = 1e-12;

  std::size_t taps() const { return system.taps(); }
  std::vector<double> initial_weights() const;
  void validate() const; // full invariants, incl. horizon/trials >= 1
};

struct TrialResult {
  std::vector<double> squared_error;        // e^2(k), k = 0..horizon-1
  std::vector<std::vector<double>> weights; // w(k+1) when recorded
  bool diverged = false;
  std::size_t diverged_at = 0;
};

/// One seeded pass of the update recursion over the synthesized signal
/// stream. A nonfinite weight flags the trial as diverged instead of
/// propagating the exception. horizon = 0 yields an empty curve.
TrialResult run_trial(const Scenario& scn, const GainRule& rule, double mu,
                      std::uint64_t seed, bool record_weights = false);

struct LearningCurve {
  std::vector<double> mse;                       // mean e^2(k) over trials
  std::vector<std::vector<double>> mean_weights; // mean w(k+1), if recorded
};

struct MonteCarloOptions {
  std::uint64_t base_seed = 1;
  bool record_weights = false;
  unsigned threads = 0; // 0 = hardware concurrency; result is independent of it
};

/// Averaged learning curves, one per algorithm, in input order. Trials are
/// distributed over worker threads in fixed blocks and reduced in block
/// order, so the result is bit-identical regardless of the thread count.
/// Throws DivergenceError (with trial and algorithm named) if any trial
/// produced nonfinite weights.
std::vector<LearningCurve> run_monte_carlo(const Scenario& scn,
                                           std::span<const Algorithm> algos,
                                           const MonteCarloOptions& opts = {});

/// Mean of the final `window` curve entries; window = 0 selects the last 10%
/// (at least one sample). Throws std::invalid_argument when window exceeds
/// the curve length.
double steady_state_mse(std::span<const double> curve, std::size_t window = 0);

/// First index k with curve[k] <= level that stays below 1.5 * level for the
/// following 50 samples (clamped at the end of the curve); nullopt when the
/// curve never settles under the level.
std::optional<std::size_t> time_to_threshold(std::span<const double> curve,
                                             double level);

inline double to_db(double power) { return 10.0 * std::log10(power); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace ptnlms
