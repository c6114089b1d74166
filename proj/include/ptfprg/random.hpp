#pragma once

// Counter-based random streams. Everything stochastic in the library draws
// from these, so results depend only on (key, index) and never on thread
// count or call order across substreams.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace ptfprg {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key of substream `index` under `key`.
constexpr std::uint64_t substream_key(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key ^ mix64(index + kGoldenGamma));
}

/// SplitMix64 generator. Word i (0-based) equals mix64(state0 + (i+1)*gamma),
/// so a stream can also be addressed at random via `word_at`.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  static constexpr std::uint64_t word_at(std::uint64_t state0, std::uint64_t i) noexcept {
    return mix64(state0 + (i + 1) * kGoldenGamma);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in (0, 1] on the 2^-53 grid.
inline double unit_open_closed(std::uint64_t word) noexcept {
  return std::ldexp(static_cast<double>((word >> 11) + 1), -53);
}

/// Standard normal variates by Box-Muller on (0,1] uniforms. Both outputs of
/// each pair are used.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t key) noexcept : gen_(key) {}

  double operator()() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = unit_open_closed(gen_());
    const double v = unit_open_closed(gen_());
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  void fill(std::span<double> out) noexcept {
    for (double& x : out) x = (*this)();
  }

  SplitMix64& engine() noexcept { return gen_; }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ptfprg
