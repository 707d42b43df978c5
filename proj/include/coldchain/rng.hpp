#pragma once

#include <cstdint>

namespace coldchain {

// Counter-based pseudo-random generation: every draw is a pure function of a
// key built from (seed, stream, indices). No generator state is carried
// between draws, so samples are reproducible bit-for-bit, prefix-stable in
// the sample index, and safe to evaluate in parallel.

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Mixes an arbitrary-length key into a single 64-bit state.
inline std::uint64_t mix_key(std::uint64_t a) { return splitmix64(a); }

template <typename... Rest>
std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix_key(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL), rest...);
}

/// Uniform double in (0, 1), never exactly 0 or 1.
inline double uniform01(std::uint64_t key) {
  const std::uint64_t bits = splitmix64(key);
  return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Inverse standard normal CDF (Wichura's AS241, double precision).
double normal_icdf(double p);

/// One N(mu, sigma) draw for the given key. sigma = 0 returns mu.
double normal(std::uint64_t key, double mu, double sigma);

/// One Poisson(mean) draw for the given key, by CDF inversion.
long long poisson(std::uint64_t key, double mean);

} // namespace rng
} // namespace coldchain
