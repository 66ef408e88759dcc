#include "ptnlms/signals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ptnlms {

double RandomStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::uint64_t derive_stream_seed(std::uint64_t trial_seed,
                                 std::uint64_t stream_id) {
  // splitmix64 finalizer
  std::uint64_t z = trial_seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

InputModel InputModel::wgn(double variance) {
  InputModel m;
  m.kind = Kind::wgn;
  m.variance = variance;
  m.validate();
  return m;
}

InputModel InputModel::bpsk() {
  InputModel m;
  m.kind = Kind::bpsk;
  m.variance = 1.0;
  return m;
}

void InputModel::validate() const {
  if (kind == Kind::wgn && (!(variance > 0.0) || !std::isfinite(variance)))
    throw std::invalid_argument("input model: wgn variance must be positive");
}

std::vector<double> gen_input(const InputModel& model, std::size_t n,
                              std::uint64_t seed) {
  model.validate();
  std::vector<double> u(n);
  RandomStream rng(seed);
  if (model.kind == InputModel::Kind::bpsk) {
    for (std::size_t i = 0; i < n; ++i)
      u[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  } else {
    const double sigma = std::sqrt(model.variance);
    for (std::size_t i = 0; i < n; ++i) u[i] = sigma * rng.gaussian();
  }
  return u;
}

std::vector<double> gen_noise(double variance, std::size_t n,
                              std::uint64_t seed) {
  if (!(variance >= 0.0))
    throw std::invalid_argument("gen_noise: negative variance");
  std::vector<double> v(n);
  RandomStream rng(seed);
  const double sigma = std::sqrt(variance);
  for (std::size_t i = 0; i < n; ++i) v[i] = sigma * rng.gaussian();
  return v;
}

void regressor(std::span<const double> u, std::size_t k, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > k || k - i >= u.size())
      x[i] = 0.0;
    else
      x[i] = u[k - i];
  }
}

std::vector<double> regressor(std::span<const double> u, std::size_t k,
                              std::size_t taps) {
  std::vector<double> x(taps);
  regressor(u, k, x);
  return x;
}

UnknownSystem UnknownSystem::fixed(std::vector<double> w) {
  UnknownSystem s;
  s.w_start = std::move(w);
  s.validate();
  return s;
}

UnknownSystem UnknownSystem::switching(std::vector<double> before,
                                       std::vector<double> after,
                                       std::size_t switch_at) {
  UnknownSystem s;
  s.w_start = std::move(before);
  s.w_after = std::move(after);
  s.switch_at = switch_at;
  s.validate();
  return s;
}

std::span<const double> UnknownSystem::coeffs_at(std::size_t k) const {
  if (is_switching() && k >= switch_at) return w_after;
  return w_start;
}

void UnknownSystem::validate() const {
  if (w_start.empty())
    throw std::invalid_argument("unknown system: empty coefficient vector");
  if (is_switching()) {
    if (w_after.size() != w_start.size())
      throw std::invalid_argument("unknown system: switch changes length");
    if (switch_at < 1)
      throw std::invalid_argument("unknown system: switch_at must be >= 1");
  }
}

double desired(const UnknownSystem& system, std::span<const double> x,
               std::size_t k, double noise_sample) {
  const std::span<const double> w = system.coeffs_at(k);
  if (x.size() != w.size())
    throw std::invalid_argument("desired: regressor length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * x[i];
  return acc + noise_sample;
}

namespace systems {

std::vector<double> near_sparse_two_tap() { return {0.99, 0.01}; }

std::vector<double> single_tap_64() {
  std::vector<double> w(64, 0.0);
  w[0] = 1.0;
  return w;
}

std::vector<double> tail_support_100() {
  std::vector<double> w(100, 0.0);
  for (std::size_t i = 94; i <= 99; ++i) w[i] = 1.0;
  return w;
}

std::vector<double> front_support_100() {
  std::vector<double> w(100, 0.0);
  for (std::size_t i = 0; i <= 5; ++i) w[i] = 1.0;
  return w;
}

UnknownSystem support_switch_100(std::size_t switch_at) {
  return UnknownSystem::switching(tail_support_100(), front_support_100(),
                                  switch_at);
}

} // namespace systems

} // namespace ptnlms
