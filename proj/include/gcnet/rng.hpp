#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gcnet {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for an independent stream identified by a base seed and task indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> task) {
  std::uint64_t h = splitmix64(base);
  for (auto t : task) h = splitmix64(h ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
  return h;
}

}  // namespace gcnet
