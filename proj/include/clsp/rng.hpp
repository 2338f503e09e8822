#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace clsp {

/// Counter-based generator (SplitMix64 output function over a Weyl counter).
/// Streams are split by hashing (base seed, stream index), so repetition r of
/// a run draws the same numbers no matter how many repetitions run or in which
/// order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Multiplier b ~ U[1 - w, 1 + w]; exactly 1.0 when w == 0.
  double multiplier(double w) noexcept { return 1.0 + w * (2.0 * uniform01() - 1.0); }

  double normal(double mean, double sd) noexcept {
    // Box-Muller; u1 kept away from zero.
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of sub-stream `stream` under `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return Rng::mix(Rng::mix(base ^ 0x6A09E667F3BCC909ULL) + Rng::mix(stream + 0xBB67AE8584CAA73BULL));
}

}  // namespace clsp
