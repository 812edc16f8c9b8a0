#pragma once

#include <cstdint>
#include <random>

namespace mlsbm {

// splitmix64 mixing step (Steele, Lea, Flood 2014). Used to derive
// statistically independent child seeds from a user seed and a salt, so
// restart r / fold f / layer a always see the same stream regardless of
// evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return splitmix64(base + splitmix64(salt));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace mlsbm
