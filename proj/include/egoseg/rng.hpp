#pragma once

#include <cstdint>
#include <random>

namespace egoseg {

// SplitMix64 finalizer; used to derive independent per-sample seeds from
// one run seed so assignments do not depend on processing order.
inline std::uint64_t mixSeed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mixSeed(mixSeed(mixSeed(seed) ^ a) ^ b);
}

// Unbiased draw from [0, n) by rejection. std::mt19937_64 output is fixed
// by the standard, unlike the standard distributions, so results are
// identical across toolchains.
inline std::uint64_t uniformIndex(std::mt19937_64& engine, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = engine();
  } while (v >= limit);
  return v % n;
}

}  // namespace egoseg
