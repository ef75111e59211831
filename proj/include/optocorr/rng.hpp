#pragma once

#include <cstdint>
#include <random>

namespace optocorr {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Noise sources drawn inside one acquisition run.
enum class Stream : std::uint64_t { drive = 1, thermal = 2, shot = 3 };

// Key for an independent substream of a run seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t run_seed, Stream stream) {
  return splitmix64(splitmix64(run_seed) ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

}  // namespace optocorr
