// Copyright 2026 The Multilight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace multilight {

// Counter-based randomness. Every draw is a pure function of
// (seed, stream, counter, dim), so renders and augmentations are
// bit-identical regardless of scheduling or worker count.

namespace detail {

/// splitmix64 finalizer; full avalanche on 64 bits.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Hashes an arbitrary key tuple into one 64-bit word.
inline uint64_t hash_key(uint64_t seed, uint64_t stream, uint64_t counter,
                         uint64_t dim = 0) {
  uint64_t h = detail::mix64(seed ^ 0x8e58c9676d2a5a35ull);
  h = detail::mix64(h ^ stream);
  h = detail::mix64(h ^ counter);
  h = detail::mix64(h ^ dim);
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits of the hash.
inline double rng_uniform(uint64_t seed, uint64_t stream, uint64_t counter,
                          uint64_t dim = 0) {
  return double(hash_key(seed, stream, counter, dim) >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double rng_uniform(uint64_t seed, uint64_t stream, uint64_t counter,
                          uint64_t dim, double lo, double hi) {
  return lo + (hi - lo) * rng_uniform(seed, stream, counter, dim);
}

/// Standard normal via Box-Muller; consumes dims (dim, dim+1).
inline double rng_normal(uint64_t seed, uint64_t stream, uint64_t counter,
                         uint64_t dim = 0) {
  const double u1 = rng_uniform(seed, stream, counter, dim);
  const double u2 = rng_uniform(seed, stream, counter, dim + 1);
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Named streams keep independent draws from colliding.
enum RngStream : uint64_t {
  kStreamRelight = 1,
  kStreamSceneGen = 2,
  kStreamDatasetView = 3,
  kStreamAugTrigger = 4,
  kStreamAugResize = 5,
  kStreamAugDistort = 6,
  kStreamAugIntensity = 7,
  kStreamAugOrientation = 8,
  kStreamAugShuffle = 9,
  kStreamAugMix = 10,
  kStreamAugInput = 11,
  kStreamInputLight = 12,
};

}  // namespace multilight
