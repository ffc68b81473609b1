#pragma once

#include <cstdint>

namespace logplate {

// Counter-based SplitMix64 stream. Draw k of a stream depends only on
// (seed, k), and split() derives independent child streams, so parallel
// workers reproduce the same numbers regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() { return mix(seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x632BE59BD9B4E019ULL))); }
  std::uint64_t draws() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace logplate
