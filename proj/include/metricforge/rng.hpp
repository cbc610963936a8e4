#pragma once

#include <cstdint>
#include <cstddef>

namespace metricforge {

// Deterministic, platform-independent pseudo-random stream (SplitMix64).
//
// The state advances by the 64-bit golden-ratio increment 0x9E3779B97F4A7C15
// and each output applies the finalizer
//     z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//     z ^= z >> 27;  z *= 0x94D049BB133111EB;
//     z ^= z >> 31;
// to the advanced state. Doubles in [0,1) take the top 53 bits of a word:
// (word >> 11) * 2^-53. Everything is fixed-order integer and IEEE double
// arithmetic, so the same seed reproduces the same draws on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo,hi); returns lo when the range is empty.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Uniform integer in [0,n), n >= 1. Modulo reduction; the bias of at most
  // n/2^64 is irrelevant at the sizes used here.
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Independent child stream k of a seed. Distinct k give decorrelated
  // streams; the derivation (seed + gamma*(k+1), then one warm-up draw) is
  // part of the documented algorithm and must not change.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t k) {
    SplitMix64 g(seed + 0x9E3779B97F4A7C15ULL * (k + 1));
    g.next_u64();
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace metricforge
