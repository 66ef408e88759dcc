#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ptnlms {

/// Deterministic sample source: a fixed seed always reproduces the same
/// stream. Gaussian variates come from a hand-rolled Box-Muller pair on top
/// of mt19937_64 so the stream does not depend on the standard library's
/// distribution internals.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal.
  double gaussian();

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Decorrelates the per-trial input and noise streams drawn from one trial
/// seed (splitmix64 over seed + stream id).
std::uint64_t derive_stream_seed(std::uint64_t trial_seed,
                                 std::uint64_t stream_id);

struct InputModel {
  enum class Kind { wgn, bpsk };
  Kind kind = Kind::wgn;
  double variance = 1.0; // wgn only; bpsk is +/-1, unit variance by nature

  static InputModel wgn(double variance = 1.0);
  static InputModel bpsk();
  void validate() const;
};

/// n samples of the input process. Deterministic per (model, n, seed).
std::vector<double> gen_input(const InputModel& model, std::size_t n,
                              std::uint64_t seed);

/// n samples of zero-mean white Gaussian measurement noise.
std::vector<double> gen_noise(double variance, std::size_t n,
                              std::uint64_t seed);

/// Tapped-delay-line regressor x(k) = [u(k), u(k-1), ..., u(k-N)] with zero
/// prehistory (u(j) = 0 for j < 0). x.size() selects the tap count.
void regressor(std::span<const double> u, std::size_t k, std::span<double> x);
std::vector<double> regressor(std::span<const double> u, std::size_t k,
                              std::size_t taps);

/// Static coefficients, or a single hard switch at a known iteration.
struct UnknownSystem {
  std::vector<double> w_start;
  std::vector<double> w_after; // empty when static
  std::size_t switch_at = 0;   // first iteration governed by w_after

  static UnknownSystem fixed(std::vector<double> w);
  static UnknownSystem switching(std::vector<double> before,
                                 std::vector<double> after,
                                 std::size_t switch_at);

  bool is_switching() const { return !w_after.empty(); }
  std::size_t taps() const { return w_start.size(); }
  std::span<const double> coeffs_at(std::size_t k) const;
  void validate() const;
};

/// d(k) = w_o(k)^T x(k) + n(k).
double desired(const UnknownSystem& system, std::span<const double> x,
               std::size_t k, double noise_sample);

/// The benchmark system catalog.
namespace systems {

/// [0.99, 0.01]: two taps, one dominant.
std::vector<double> near_sparse_two_tap();

/// [1, 0, ..., 0] in R^64.
std::vector<double> single_tap_64();

/// 100 taps, ones at indices 94..99.
std::vector<double> tail_support_100();

/// 100 taps, ones at indices 0..5.
std::vector<double> front_support_100();

/// Tail support for the first switch_at iterations, then front support.
UnknownSystem support_switch_100(std::size_t switch_at = 2000);

} // namespace systems

} // namespace ptnlms
