#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fmenc {

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Every random draw flows from one base seed through named sub-streams
// ("init", "batch-order", "sampling", ...), so independently seeded
// components stay decorrelated yet fully reproducible.
inline std::uint64_t substream_seed(std::uint64_t base, std::string_view name) {
  return splitmix64(base ^ fnv1a64(name));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace fmenc
