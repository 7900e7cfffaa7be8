#pragma once

#include <cstdint>

namespace midlayer {

/// SplitMix64. Small, fast, and good enough for sampling experiments; the
/// per-sample stream rule below keeps parallel workers reproducible.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Unbiased uniform draw from [0, bound) via rejection.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t lim = ~uint64_t(0) - ~uint64_t(0) % bound;
    uint64_t x;
    do {
      x = next();
    } while (x >= lim);
    return x % bound;
  }

  /// Stream-split rule: sample index i draws from an independent generator
  /// seeded by mixing i into the run seed.
  static SplitMix64 stream(uint64_t seed, uint64_t index) {
    SplitMix64 mixer(seed ^ (index * 0xD1B54A32D192ED03ull + 0x9E3779B97F4A7C15ull));
    return SplitMix64(mixer.next());
  }

private:
  uint64_t state_;
};

}  // namespace midlayer
