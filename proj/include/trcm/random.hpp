#pragma once

#include <cstdint>
#include <random>

namespace trcm {

using Rng = std::mt19937_64;

/// Fixed offsets used to split one run seed into independent streams.
namespace streams {
inline constexpr std::uint64_t kContext = 1;
inline constexpr std::uint64_t kReward = 2;
inline constexpr std::uint64_t kCost = 3;
inline constexpr std::uint64_t kBid = 4;
inline constexpr std::uint64_t kStructure = 5;
// Provider i resamples from stream kResampleBase + i.
inline constexpr std::uint64_t kResampleBase = 1000;
}  // namespace streams

/// SplitMix64 finalizer applied to (seed, stream); distinct streams give
/// decorrelated generator seeds.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

/// Uniform draw on [0, 1) with a fixed consumption of one 64-bit word.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace trcm
