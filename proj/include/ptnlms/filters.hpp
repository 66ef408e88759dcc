#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ptnlms {

/// Thrown when an update produces a nonfinite weight (or was fed nonfinite
/// data). The experiment runner catches this to flag diverged trials.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Which diagonal gain vector g(k) the update recursion uses.
enum class GainVariant { identity, pnlms, ipnlms, pure_proportional };

/// Smooth l0-penalty attractor pulling small weights toward zero.
/// Applied elementwise after the normalized gradient step:
///   w_i <- w_i - kappa * beta * sgn(w_i) * exp(-beta * |w_i|),
/// with sgn(0) = 0, so exact zeros are fixed points.
struct ZeroAttractor {
  double kappa = 2e-3;
  double beta = 5.0;
};

/// Gain rule selection plus its constants. Use the factory functions; they
/// fill the conventional defaults. The zero attractor combines only with the
/// identity variant (plain NLMS plus attraction).
struct GainRule {
  GainVariant variant = GainVariant::identity;

  // pnlms
  double delta_p = 0.01;  // activation floor, guards the all-zero start
  double rho = 0.01;      // weight of the floor term in the max

  // ipnlms
  double alpha = -0.5;    // blend in [-1, 1); -1 degenerates to NLMS
  double delta_ip = 0.0;  // regularizer against ||w||_1 -> 0

  std::optional<ZeroAttractor> zero_attractor;

  static GainRule identity();
  static GainRule pnlms(double delta_p = 0.01, double rho = 0.01);
  static GainRule ipnlms(double alpha = -0.5, double delta_ip = 0.01);
  static GainRule pure_proportional();
  static GainRule l0_nlms(double kappa = 2e-3, double beta = 5.0);

  /// Throws std::invalid_argument if any constant is out of range or the
  /// attractor is combined with a non-identity variant.
  void validate() const;
};

/// Adaptive weight vector plus iteration counter. The weight length is fixed
/// for the life of the filter; every step leaves all entries finite or throws
/// DivergenceError.
struct FilterState {
  std::vector<double> w;
  std::uint64_t iteration = 0;

  FilterState() = default;
  explicit FilterState(std::size_t taps) : w(taps, 0.0) {}
  explicit FilterState(std::vector<double> init) : w(std::move(init)) {}
};

/// One sample of (regressor, desired) plus the step-size parameters.
struct StepInput {
  std::span<const double> x;
  double d = 0.0;
  double mu = 1.0;    // in (0, 1]
  double delta = 0.0; // scalar denominator regularizer, >= 0
};

struct StepResult {
  double y = 0.0; // filter output w(k)^T x(k)
  double e = 0.0; // a-priori error d(k) - y(k)
};

/// PNLMS gain: gamma_i = max(|w_i|, rho * max(delta_p, |w_0|, ..., |w_N|)),
/// g_i = gamma_i / sum_j |gamma_j|. Always strictly positive, sums to one.
std::vector<double> gain_pnlms(std::span<const double> w, double delta_p = 0.01,
                               double rho = 0.01);

/// IPNLMS gain: g_i = (1-alpha)/(2(N+1)) + (1+alpha)|w_i| / (2||w||_1 + delta_ip).
/// Throws std::domain_error when alpha > -1, delta_ip = 0 and ||w||_1 = 0.
std::vector<double> gain_ipnlms(std::span<const double> w, double alpha,
                                double delta_ip);

/// Plain proportional gain g_i = |w_i| / ||w||_1, with no floor. Throws
/// std::domain_error when ||w||_1 = 0; zero weights get exactly zero gain
/// and therefore never move under this rule.
std::vector<double> gain_pure_proportional(std::span<const double> w);

/// Dispatch on the rule variant (identity yields all ones).
std::vector<double> gain(const GainRule& rule, std::span<const double> w);

/// Allocation-free variant for per-sample loops. g.size() must equal w.size().
void gain_into(const GainRule& rule, std::span<const double> w,
               std::span<double> g);

/// Core recursion with an explicit gain vector:
///   y = w^T x, e = d - y,
///   w <- w + mu * e * (g .* x) / (sum_i g_i x_i^2 + delta).
/// The gain is whatever the caller supplies; no attractor is applied. Used
/// directly by the transformed-domain equivalence analysis.
StepResult step_with_gain(FilterState& state, const StepInput& in,
                          std::span<const double> g);

/// Full update: gain computed from the current weights, then the recursion,
/// then the zero attractor if the rule carries one. The scratch vector is
/// resized to the weight length and reused across calls.
StepResult step(FilterState& state, const StepInput& in, const GainRule& rule,
                std::vector<double>& gain_scratch);
StepResult step(FilterState& state, const StepInput& in, const GainRule& rule);

void apply_zero_attractor(std::span<double> w, const ZeroAttractor& za);

} // namespace ptnlms
