#include "ptnlms/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ptnlms {

std::vector<double> Scenario::initial_weights() const {
  if (init.empty()) return std::vector<double>(taps(), 0.0);
  return init;
}

void Scenario::validate() const {
  system.validate();
  input.validate();
  if (!(noise_var >= 0.0))
    throw std::invalid_argument("scenario: negative noise variance");
  if (horizon < 1) throw std::invalid_argument("scenario: horizon must be >= 1");
  if (trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
  if (!init.empty() && init.size() != taps())
    throw std::invalid_argument("scenario: init length != system length");
  if (!(delta >= 0.0))
    throw std::invalid_argument("scenario: delta must be nonnegative");
}

TrialResult run_trial(const Scenario& scn, const GainRule& rule, double mu,
                      std::uint64_t seed, bool record_weights) {
  scn.system.validate();
  scn.input.validate();
  rule.validate();
  if (!(mu > 0.0) || mu > 1.0)
    throw std::invalid_argument("run_trial: mu must lie in (0, 1]");
  if (!scn.init.empty() && scn.init.size() != scn.taps())
    throw std::invalid_argument("run_trial: init length != system length");

  TrialResult out;
  const std::size_t horizon = scn.horizon;
  out.squared_error.reserve(horizon);
  FilterState state(scn.initial_weights());
  if (horizon == 0) return out;

  const std::vector<double> u =
      gen_input(scn.input, horizon, derive_stream_seed(seed, 0));
  const std::vector<double> noise =
      gen_noise(scn.noise_var, horizon, derive_stream_seed(seed, 1));

  const std::size_t n = scn.taps();
  std::vector<double> x(n);
  std::vector<double> gain_scratch;
  if (record_weights) out.weights.reserve(horizon);

  for (std::size_t k = 0; k < horizon; ++k) {
    regressor(u, k, x);
    const double d = desired(scn.system, x, k, noise[k]);
    StepResult r;
    try {
      r = step(state, StepInput{x, d, mu, scn.delta}, rule, gain_scratch);
    } catch (const DivergenceError&) {
      out.diverged = true;
      out.diverged_at = k;
      break;
    }
    const double e2 = r.e * r.e;
    if (!std::isfinite(e2)) {
      out.diverged = true;
      out.diverged_at = k;
      break;
    }
    out.squared_error.push_back(e2);
    if (record_weights) out.weights.push_back(state.w);
  }
  return out;
}

namespace {

// Per-block accumulation keeps the final reduction order fixed no matter how
// blocks were scheduled across threads.
constexpr std::size_t kTrialsPerBlock = 8;

struct BlockSums {
  // [algo][k] running sum of e^2; [algo][k*taps + i] for weights
  std::vector<std::vector<double>> e2;
  std::vector<std::vector<double>> w;
};

struct DivergenceReport {
  std::size_t trial = 0;
  std::size_t iteration = 0;
  std::string algorithm;
};

} // namespace

std::vector<LearningCurve> run_monte_carlo(const Scenario& scn,
                                           std::span<const Algorithm> algos,
                                           const MonteCarloOptions& opts) {
  scn.validate();
  if (algos.empty())
    throw std::invalid_argument("run_monte_carlo: no algorithms given");
  for (const Algorithm& a : algos) {
    a.rule.validate();
    if (!(a.mu > 0.0) || a.mu > 1.0)
      throw std::invalid_argument("run_monte_carlo: mu of '" + a.name +
                                  "' must lie in (0, 1]");
  }

  const std::size_t trials = scn.trials;
  const std::size_t horizon = scn.horizon;
  const std::size_t taps = scn.taps();
  const std::size_t n_algos = algos.size();
  const std::size_t n_blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;

  std::vector<BlockSums> blocks(n_blocks);
  std::vector<std::optional<DivergenceReport>> failures(n_blocks);

  auto process_block = [&](std::size_t b) {
    BlockSums& sums = blocks[b];
    sums.e2.assign(n_algos, std::vector<double>(horizon, 0.0));
    if (opts.record_weights)
      sums.w.assign(n_algos, std::vector<double>(horizon * taps, 0.0));
    const std::size_t t_lo = b * kTrialsPerBlock;
    const std::size_t t_hi = std::min(trials, t_lo + kTrialsPerBlock);
    for (std::size_t t = t_lo; t < t_hi; ++t) {
      const std::uint64_t seed = opts.base_seed + t;
      for (std::size_t a = 0; a < n_algos; ++a) {
        TrialResult r = run_trial(scn, algos[a].rule, algos[a].mu, seed,
                                  opts.record_weights);
        if (r.diverged) {
          if (!failures[b])
            failures[b] = DivergenceReport{t, r.diverged_at, algos[a].name};
          return;
        }
        for (std::size_t k = 0; k < horizon; ++k)
          sums.e2[a][k] += r.squared_error[k];
        if (opts.record_weights)
          for (std::size_t k = 0; k < horizon; ++k)
            for (std::size_t i = 0; i < taps; ++i)
              sums.w[a][k * taps + i] += r.weights[k][i];
      }
    }
  };

  unsigned threads = opts.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, n_blocks));

  if (threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) process_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= n_blocks) return;
        process_block(b);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t b = 0; b < n_blocks; ++b) {
    if (failures[b]) {
      const DivergenceReport& f = *failures[b];
      throw DivergenceError("trial " + std::to_string(f.trial) +
                            " diverged at iteration " +
                            std::to_string(f.iteration) + " (algorithm '" +
                            f.algorithm + "')");
    }
  }

  std::vector<LearningCurve> curves(n_algos);
  const double inv_trials = 1.0 / static_cast<double>(trials);
  for (std::size_t a = 0; a < n_algos; ++a) {
    curves[a].mse.assign(horizon, 0.0);
    for (std::size_t b = 0; b < n_blocks; ++b)
      for (std::size_t k = 0; k < horizon; ++k)
        curves[a].mse[k] += blocks[b].e2[a][k];
    for (double& v : curves[a].mse) v *= inv_trials;
    if (opts.record_weights) {
      curves[a].mean_weights.assign(horizon, std::vector<double>(taps, 0.0));
      for (std::size_t b = 0; b < n_blocks; ++b)
        for (std::size_t k = 0; k < horizon; ++k)
          for (std::size_t i = 0; i < taps; ++i)
            curves[a].mean_weights[k][i] += blocks[b].w[a][k * taps + i];
      for (auto& wk : curves[a].mean_weights)
        for (double& v : wk) v *= inv_trials;
    }
  }
  return curves;
}

double steady_state_mse(std::span<const double> curve, std::size_t window) {
  if (curve.empty())
    throw std::invalid_argument("steady_state_mse: empty curve");
  if (window == 0) window = std::max<std::size_t>(1, curve.size() / 10);
  if (window > curve.size())
    throw std::invalid_argument("steady_state_mse: window exceeds curve length");
  double acc = 0.0;
  for (std::size_t k = curve.size() - window; k < curve.size(); ++k)
    acc += curve[k];
  return acc / static_cast<double>(window);
}

std::optional<std::size_t> time_to_threshold(std::span<const double> curve,
                                             double level) {
  if (!(level > 0.0))
    throw std::invalid_argument("time_to_threshold: level must be positive");
  constexpr std::size_t kDebounce = 50;
  const double ceiling = level * 1.5;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k] > level) continue;
    bool settled = true;
    const std::size_t j_hi = std::min(curve.size() - 1, k + kDebounce);
    for (std::size_t j = k; j <= j_hi; ++j) {
      if (curve[j] > ceiling) {
        settled = false;
        break;
      }
    }
    if (settled) return k;
  }
  return std::nullopt;
}

} // namespace ptnlms
