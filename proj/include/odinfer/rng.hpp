#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace odinfer {

// One splitmix64 round; a solid 64-bit mixer with full avalanche.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combination of several values into one hash. Used to
// derive independent deterministic RNG streams: mix(seed, tag, index, ...).
inline std::uint64_t mix(std::uint64_t a) { return splitmix64(a); }
template <typename... Rest>
std::uint64_t mix(std::uint64_t a, Rest... rest) {
  return splitmix64(a ^ mix(static_cast<std::uint64_t>(rest)...));
}

// Uniform draw in [0, 1) with 53 random bits.
inline double u01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Deterministic engine for a (seed, stream...) key. The standard
// distributions are avoided everywhere so sampled values do not depend on
// the standard library implementation; only the raw engine output is used.
inline std::mt19937_64 seeded_engine(std::uint64_t key) {
  return std::mt19937_64(splitmix64(key));
}

inline double next_u01(std::mt19937_64& eng) { return u01(eng()); }

// Uniform in [lo, hi).
inline double next_uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * next_u01(eng);
}

// Standard normal via Box-Muller (one value per call; the pair's second
// member is discarded to keep draw counting trivial).
inline double next_normal(std::mt19937_64& eng) {
  double u1 = next_u01(eng);
  double u2 = next_u01(eng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Exponential with the given mean.
inline double next_exponential(std::mt19937_64& eng, double mean) {
  double u = next_u01(eng);
  if (u <= 0.0) u = 0x1.0p-53;
  return -mean * std::log(u);
}

// Formats 128 random bits as a version-4 UUID string.
inline std::string uuid_from(std::uint64_t hi, std::uint64_t lo) {
  static const char* hex = "0123456789abcdef";
  // Force the version (4) and variant (10xx) nibbles so the output is
  // shaped like the ids real vendors publish.
  hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;
  lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;
  std::string out(36, '-');
  int pos = 0;
  auto put = [&](std::uint64_t word, int nibbles) {
    for (int i = nibbles - 1; i >= 0; --i) {
      out[static_cast<std::size_t>(pos++)] = hex[(word >> (4 * i)) & 0xf];
    }
  };
  put(hi >> 32, 8);
  ++pos;
  put(hi >> 16, 4);
  ++pos;
  put(hi, 4);
  ++pos;
  put(lo >> 48, 4);
  ++pos;
  put(lo, 12);
  return out;
}

// Convenience: UUID derived from an arbitrary stream key.
inline std::string uuid_for(std::uint64_t key) {
  return uuid_from(splitmix64(key), splitmix64(key ^ 0x6a09e667f3bcc909ULL));
}

}  // namespace odinfer
