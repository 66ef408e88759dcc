#include "ptnlms/filters.hpp"

#include <cmath>
#include <string>

namespace ptnlms {

GainRule GainRule::identity() { return GainRule{}; }

GainRule GainRule::pnlms(double delta_p, double rho) {
  GainRule r;
  r.variant = GainVariant::pnlms;
  r.delta_p = delta_p;
  r.rho = rho;
  r.validate();
  return r;
}

GainRule GainRule::ipnlms(double alpha, double delta_ip) {
  GainRule r;
  r.variant = GainVariant::ipnlms;
  r.alpha = alpha;
  r.delta_ip = delta_ip;
  r.validate();
  return r;
}

GainRule GainRule::pure_proportional() {
  GainRule r;
  r.variant = GainVariant::pure_proportional;
  return r;
}

GainRule GainRule::l0_nlms(double kappa, double beta) {
  GainRule r;
  r.variant = GainVariant::identity;
  r.zero_attractor = ZeroAttractor{kappa, beta};
  r.validate();
  return r;
}

void GainRule::validate() const {
  switch (variant) {
    case GainVariant::pnlms:
      if (!(delta_p > 0.0) || !std::isfinite(delta_p))
        throw std::invalid_argument("pnlms: delta_p must be positive");
      if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("pnlms: rho must be positive");
      break;
    case GainVariant::ipnlms:
      if (!(alpha >= -1.0) || !(alpha < 1.0))
        throw std::invalid_argument("ipnlms: alpha must lie in [-1, 1)");
      if (!(delta_ip >= 0.0) || !std::isfinite(delta_ip))
        throw std::invalid_argument("ipnlms: delta_ip must be nonnegative");
      break;
    default:
      break;
  }
  if (zero_attractor) {
    if (variant != GainVariant::identity)
      throw std::invalid_argument(
          "zero attractor combines only with the identity gain");
    if (!(zero_attractor->kappa >= 0.0) || !std::isfinite(zero_attractor->kappa))
      throw std::invalid_argument("zero attractor: kappa must be nonnegative");
    if (!(zero_attractor->beta > 0.0) || !std::isfinite(zero_attractor->beta))
      throw std::invalid_argument("zero attractor: beta must be positive");
  }
}

namespace {

void pnlms_into(std::span<const double> w, double delta_p, double rho,
                std::span<double> g) {
  double max_abs = delta_p;
  for (double wi : w) max_abs = std::max(max_abs, std::abs(wi));
  const double floor = rho * max_abs;

  double denom = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double gamma = std::max(std::abs(w[i]), floor);
    g[i] = gamma;
    denom += std::abs(gamma); // gamma >= 0 already; keep the literal form
  }
  for (std::size_t i = 0; i < w.size(); ++i) g[i] /= denom;
}

void ipnlms_into(std::span<const double> w, double alpha, double delta_ip,
                 std::span<double> g) {
  const double n = static_cast<double>(w.size());
  const double nlms_term = (1.0 - alpha) / (2.0 * n);

  double l1 = 0.0;
  for (double wi : w) l1 += std::abs(wi);
  const double denom = 2.0 * l1 + delta_ip;

  if (denom <= 0.0) {
    if (alpha > -1.0)
      throw std::domain_error(
          "ipnlms: ||w||_1 = 0 with delta_ip = 0; regularize delta_ip");
    // alpha == -1: the proportional term vanishes identically
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = nlms_term;
    return;
  }
  const double prop_scale = (1.0 + alpha) / denom;
  for (std::size_t i = 0; i < w.size(); ++i)
    g[i] = nlms_term + prop_scale * std::abs(w[i]);
}

void pure_proportional_into(std::span<const double> w, std::span<double> g) {
  double l1 = 0.0;
  for (double wi : w) l1 += std::abs(wi);
  if (!(l1 > 0.0))
    throw std::domain_error(
        "pure proportional gain undefined for ||w||_1 = 0");
  for (std::size_t i = 0; i < w.size(); ++i) g[i] = std::abs(w[i]) / l1;
}

} // namespace

void gain_into(const GainRule& rule, std::span<const double> w,
               std::span<double> g) {
  if (g.size() != w.size())
    throw std::invalid_argument("gain_into: output length mismatch");
  if (w.empty()) throw std::invalid_argument("gain: empty weight vector");
  switch (rule.variant) {
    case GainVariant::identity:
      for (std::size_t i = 0; i < w.size(); ++i) g[i] = 1.0;
      break;
    case GainVariant::pnlms:
      pnlms_into(w, rule.delta_p, rule.rho, g);
      break;
    case GainVariant::ipnlms:
      ipnlms_into(w, rule.alpha, rule.delta_ip, g);
      break;
    case GainVariant::pure_proportional:
      pure_proportional_into(w, g);
      break;
  }
}

std::vector<double> gain_pnlms(std::span<const double> w, double delta_p,
                               double rho) {
  GainRule r = GainRule::pnlms(delta_p, rho);
  std::vector<double> g(w.size());
  gain_into(r, w, g);
  return g;
}

std::vector<double> gain_ipnlms(std::span<const double> w, double alpha,
                                double delta_ip) {
  GainRule r = GainRule::ipnlms(alpha, delta_ip);
  std::vector<double> g(w.size());
  gain_into(r, w, g);
  return g;
}

std::vector<double> gain_pure_proportional(std::span<const double> w) {
  std::vector<double> g(w.size());
  pure_proportional_into(w, g);
  return g;
}

std::vector<double> gain(const GainRule& rule, std::span<const double> w) {
  rule.validate();
  std::vector<double> g(w.size());
  gain_into(rule, w, g);
  return g;
}

StepResult step_with_gain(FilterState& state, const StepInput& in,
                          std::span<const double> g) {
  const std::size_t n = state.w.size();
  if (in.x.size() != n)
    throw std::invalid_argument("step: regressor/weight length mismatch");
  if (g.size() != n)
    throw std::invalid_argument("step: gain/weight length mismatch");
  if (!(in.mu > 0.0) || in.mu > 1.0)
    throw std::invalid_argument("step: mu must lie in (0, 1]");
  if (!(in.delta >= 0.0))
    throw std::invalid_argument("step: delta must be nonnegative");
  if (!std::isfinite(in.d))
    throw DivergenceError("step: nonfinite desired sample");

  double y = 0.0;
  double denom = in.delta;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = in.x[i];
    if (!std::isfinite(xi))
      throw DivergenceError("step: nonfinite regressor entry");
    y += state.w[i] * xi;
    denom += g[i] * xi * xi;
  }
  const double e = in.d - y;
  if (!std::isfinite(e))
    throw DivergenceError("step: nonfinite error");
  if (!(denom > 0.0))
    throw std::domain_error("step: denominator x^T G x + delta is not positive");

  const double scale = in.mu * e / denom;
  for (std::size_t i = 0; i < n; ++i) {
    state.w[i] += scale * g[i] * in.x[i];
    if (!std::isfinite(state.w[i]))
      throw DivergenceError("step: weight became nonfinite");
  }
  ++state.iteration;
  return StepResult{y, e};
}

StepResult step(FilterState& state, const StepInput& in, const GainRule& rule,
                std::vector<double>& gain_scratch) {
  rule.validate();
  gain_scratch.resize(state.w.size());
  // gain from w(k), update, then attraction on w(k+1)
  gain_into(rule, state.w, gain_scratch);
  const StepResult r = step_with_gain(state, in, gain_scratch);
  if (rule.zero_attractor) apply_zero_attractor(state.w, *rule.zero_attractor);
  return r;
}

StepResult step(FilterState& state, const StepInput& in, const GainRule& rule) {
  std::vector<double> scratch;
  return step(state, in, rule, scratch);
}

void apply_zero_attractor(std::span<double> w, const ZeroAttractor& za) {
  const double kb = za.kappa * za.beta;
  for (double& wi : w) {
    if (wi > 0.0)
      wi -= kb * std::exp(-za.beta * wi);
    else if (wi < 0.0)
      wi += kb * std::exp(za.beta * wi);
  }
}

} // namespace ptnlms
