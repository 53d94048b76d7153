#pragma once

#include <cstdint>
#include <random>

namespace markovmono {

/// SplitMix64 finalizer. Used only to derive substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `index` under master seed `seed`. Substreams depend only
/// on (seed, index), never on the order they are consumed in.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

/// The library's generator: std::mt19937_64, whose output sequence is fixed
/// by the C++ standard.
using Rng = std::mt19937_64;

inline Rng make_substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(substream_seed(seed, index));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw. Spelled out
/// instead of using std::uniform_real_distribution, whose algorithm varies
/// between standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, bound), bound > 0. Modulo with the biased tail
/// rejected.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace markovmono
