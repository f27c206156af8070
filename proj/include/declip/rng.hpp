#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "declip/types.hpp"

namespace declip {

// SplitMix64: output n is mix(seed + (n+1) * gamma), so any stream position can
// be computed directly from the seed. Gaussian draws use Box-Muller on two
// consecutive 53-bit uniforms and never cache, which keeps the stream layout
// trivially portable to other implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }

  std::uint64_t operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cplx complex_gaussian(double variance) noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(0.5 * variance);
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t state_;
};

// Per-frame seed: chained SplitMix64 finalizer over (master, point, frame).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                    std::uint64_t frame) noexcept {
  std::uint64_t s = SplitMix64::mix(master + SplitMix64::kGamma * (point + 1));
  return SplitMix64::mix(s + SplitMix64::kGamma * (frame + 1));
}

}  // namespace declip
