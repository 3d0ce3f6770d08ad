#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "krf/types.hpp"

namespace krf {

using Rng = std::mt19937_64;

/// Mixes a seed with a stream tag (splitmix64 finalizer). Used everywhere a
/// child computation needs its own reproducible stream, so that results do
/// not depend on the order in which sibling computations run.
inline std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline Rng makeRng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(deriveSeed(seed, stream));
}

/// Uniform draw from [0, bound) by rejection; avoids the implementation
/// differences of std::uniform_int_distribution.
inline std::uint64_t uniformIndex(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniformReal(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Selection sampling of m indices out of {0..n-1}, returned in increasing
/// order. Each m-subset is equally likely.
inline std::vector<Index> sampleWithoutReplacement(Index n, Index m, Rng& rng) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(m));
  Index needed = m;
  for (Index i = 0; i < n && needed > 0; ++i) {
    const auto remaining = static_cast<std::uint64_t>(n - i);
    if (uniformIndex(rng, remaining) < static_cast<std::uint64_t>(needed)) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

/// In-place Fisher-Yates shuffle driven by uniformIndex.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniformIndex(rng, i)]);
  }
}

/// Standard normal via Box-Muller on uniformReal draws.
inline double normalDraw(Rng& rng) {
  double u = uniformReal(rng);
  while (u <= 0.0) u = uniformReal(rng);
  const double v = uniformReal(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
}

}  // namespace krf
