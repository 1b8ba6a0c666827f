// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace dff {

/// Counter-based random numbers: every draw is a pure hash of (seed, stream
/// coordinates), so parallel and serial evaluation orders produce identical
/// streams. The mixer is the splitmix64 finalizer applied to a combined key.
namespace rng {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t key(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
  uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (a + kGolden));
  h = mix64(h ^ (b + kGolden));
  h = mix64(h ^ (c + kGolden));
  h = mix64(h ^ (d + kGolden));
  return h;
}

/// Uniform in (0, 1]; never returns 0 so it is safe under log().
inline double uniform(uint64_t k) {
  return (static_cast<double>(k >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two decorrelated sub-keys.
inline double normal(uint64_t k) {
  double u1 = uniform(mix64(k ^ 0x5851f42d4c957f2dULL));
  double u2 = uniform(mix64(k ^ 0x14057b7ef767814fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng
}  // namespace dff
