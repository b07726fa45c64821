#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bmcp {

// Generator used by every sampler. Each parallel task owns its own instance.
using Rng = std::mt19937_64;

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a, stable across platforms and standard libraries (unlike std::hash).
constexpr std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed of replicate `index` of the stream `name` under `master_seed`.
// Depends only on its arguments, so replicates can run in any order.
constexpr std::uint64_t replicate_seed(std::uint64_t master_seed, std::string_view name,
                                       std::uint64_t index) {
  return mix64(mix64(master_seed ^ hash_name(name)) + mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master_seed, std::string_view name, std::uint64_t index) {
  return Rng(replicate_seed(master_seed, name, index));
}

// Uniform draw on the open interval (0,1) with 53 random bits. Does not go
// through std::uniform_real_distribution so streams are identical across
// standard library implementations.
inline double uniform_open(Rng& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

}  // namespace bmcp
