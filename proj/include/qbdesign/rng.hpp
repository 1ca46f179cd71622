#pragma once

#include <cstdint>

namespace qbdesign {

// SplitMix64 (Steele, Lea & Flood 2014). The k-th output depends only on
// seed + k * kGamma, so streams are reproducible on every platform.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Output number `index` (0-based) of the stream seeded with `seed`.
  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGamma);
  }

 private:
  std::uint64_t state_;
};

}  // namespace qbdesign
