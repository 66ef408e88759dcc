#include "ptnlms/scenarios.hpp"

#include <stdexcept>

namespace ptnlms {

namespace {

std::vector<Algorithm> benchmark_roster(double mu_nlms, double mu_pnlms,
                                        double mu_ipnlms, double mu_l0) {
  using namespace defaults;
  return {
      {"nlms", GainRule::identity(), mu_nlms},
      {"pnlms", GainRule::pnlms(kPnlmsDeltaP, kPnlmsRho), mu_pnlms},
      {"ipnlms", GainRule::ipnlms(kIpnlmsAlpha, kIpnlmsDeltaIp), mu_ipnlms},
      {"l0nlms", GainRule::l0_nlms(kAttractorKappa, kAttractorBeta), mu_l0},
  };
}

RunPreset fig1() {
  RunPreset p;
  p.name = "fig1";
  p.description =
      "two-tap near-sparse system [0.99, 0.01], BPSK input, coefficient "
      "trajectories for the surface-contour comparison";
  p.scenario.system = UnknownSystem::fixed(systems::near_sparse_two_tap());
  p.scenario.input = InputModel::bpsk();
  p.scenario.noise_var = defaults::kNoiseVar;
  p.scenario.horizon = 1000;
  p.scenario.trials = 1;
  p.scenario.delta = defaults::kDelta;
  p.algorithms = {
      {"nlms", GainRule::identity(), 0.4},
      {"pnlms", GainRule::pnlms(defaults::kPnlmsDeltaP, defaults::kPnlmsRho),
       0.4},
  };
  p.record_weights = true;
  return p;
}

RunPreset fig2a() {
  RunPreset p;
  p.name = "fig2a";
  p.description =
      "64-tap single-spike system, zero initialization, white Gaussian input";
  p.scenario.system = UnknownSystem::fixed(systems::single_tap_64());
  p.scenario.input = InputModel::wgn();
  p.scenario.noise_var = defaults::kNoiseVar;
  p.scenario.horizon = 1000;
  p.scenario.trials = 1000;
  p.scenario.delta = defaults::kDelta;
  p.algorithms = benchmark_roster(0.4, 0.3, 0.4, 0.99);
  return p;
}

RunPreset fig2b() {
  RunPreset p = fig2a();
  p.name = "fig2b";
  p.description =
      "64-tap single-spike system, constant 0.05 initialization, white "
      "Gaussian input";
  p.scenario.init.assign(64, 0.05);
  return p;
}

RunPreset fig2c() {
  RunPreset p;
  p.name = "fig2c";
  p.description =
      "100-tap sparse system whose support jumps from the tail to the front "
      "at iteration 2000";
  p.scenario.system = systems::support_switch_100(2000);
  p.scenario.input = InputModel::wgn();
  p.scenario.noise_var = defaults::kNoiseVar;
  p.scenario.horizon = 4000;
  p.scenario.trials = 1000;
  p.scenario.delta = defaults::kDelta;
  p.algorithms = benchmark_roster(0.6, 0.15, 0.45, 0.99);
  return p;
}

} // namespace

std::vector<std::string> preset_names() {
  return {"fig1", "fig2a", "fig2b", "fig2c"};
}

RunPreset make_preset(const std::string& name) {
  if (name == "fig1") return fig1();
  if (name == "fig2a") return fig2a();
  if (name == "fig2b") return fig2b();
  if (name == "fig2c") return fig2c();
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

} // namespace ptnlms
