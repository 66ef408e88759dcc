#pragma once

#include <string>
#include <vector>

#include "ptnlms/harness.hpp"

namespace ptnlms {

/// A named, ready-to-run experiment: scenario plus algorithm roster.
struct RunPreset {
  std::string name;
  std::string description;
  Scenario scenario;
  std::vector<Algorithm> algorithms;
  bool record_weights = false;
};

/// Built-in catalog: fig1, fig2a, fig2b, fig2c.
std::vector<std::string> preset_names();

/// Throws std::invalid_argument for unknown names.
RunPreset make_preset(const std::string& name);

/// Shared parameter defaults for the benchmark algorithms.
namespace defaults {
inline constexpr double kDelta = 1e-12;
inline constexpr double kNoiseVar = 1e-2;
inline constexpr double kPnlmsDeltaP = 0.01;
inline constexpr double kPnlmsRho = 0.01;
inline constexpr double kIpnlmsAlpha = -0.5;
inline constexpr double kIpnlmsDeltaIp = 0.01;
inline constexpr double kAttractorKappa = 2e-3;
inline constexpr double kAttractorBeta = 5.0;
} // namespace defaults

} // namespace ptnlms
