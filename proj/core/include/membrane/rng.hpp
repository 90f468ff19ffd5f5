#pragma once

#include <cstdint>
#include <random>

namespace membrane {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derived stream seed: mix(master, a, b) = sm(sm(sm(master) ^ a) ^ b).
// Child seeds depend only on their indices, never on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(mix_seed(master, stream));
}

}  // namespace membrane
