#pragma once

#include <cstdint>
#include <random>

namespace selfsim {

// std::mt19937_64 output is fixed by the standard, but the standard
// distributions are not, so draws go through these helpers to keep seeded
// runs identical across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace selfsim
