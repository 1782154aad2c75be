#pragma once

#include <cmath>
#include <cstdint>

namespace skipfree {

/*
 * SplitMix64 (Steele, Lea, Flood 2014): state advances by the golden-ratio
 * increment, output is the mix64 finaliser of the new state.
 *
 * Stream layout used by the samplers: a master SplitMix64 is seeded with the
 * user seed; path k (0-based) runs its own SplitMix64 whose initial state is the
 * master's (k+1)-th output. Paths therefore never depend on how they are
 * distributed over worker threads.
 */
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Exponential with the given rate, by inversion.
  double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

  /// Generator for path `k` of a run seeded with `seed`.
  static constexpr SplitMix64 for_path(std::uint64_t seed, std::uint64_t k) noexcept {
    return SplitMix64(mix(seed + (k + 1) * kGamma));
  }

 private:
  std::uint64_t state_;
};

}  // namespace skipfree
