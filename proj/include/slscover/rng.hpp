#pragma once

// Seeded random streams. Each (seed, tag) pair owns an independent SplitMix64
// sequence, so adding draws to one purpose never perturbs another.

#include <cstdint>

namespace slscover {

enum class StreamTag : std::uint64_t {
  Vertices = 1,
  Sites = 2,
  Radii = 3,
  Weights = 4,
  Sampling = 5,
};

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  SplitMix64(std::uint64_t seed, StreamTag tag)
      : state_(splitmix64_mix(seed ^ splitmix64_mix(
                                          static_cast<std::uint64_t>(tag)))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace slscover
