#pragma once

#include <cstdint>

#include "midlayer/errors.hpp"

namespace midlayer {

// C(n,k) in 64 bits; valid for n <= 63 (C(63,31) < 2^63).
inline uint64_t binom64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 63) throw scale_error("binom64 supports n <= 63");
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;  // exact division at every step
  return static_cast<uint64_t>(r);
}

// Next k-subset mask in colex order (Gosper's hack).
inline uint64_t next_subset_mask(uint64_t v) {
  uint64_t c = v & ~(v - 1);
  uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

}  // namespace midlayer
