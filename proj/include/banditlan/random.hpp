#pragma once

#include <cstdint>
#include <random>

namespace banditlan {

/// SplitMix64 finalizer. Every seed in the project is derived through this.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed number `index` of `parent`: mix64(mix64(parent) ^ mix64(index)).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) ^ mix64(index));
}

/// Single-owner pseudo-random stream (mt19937_64 engine).
///
/// Variates are produced by fixed transforms of the raw 64-bit output so that
/// the sequence does not depend on the standard library's distribution
/// implementations:
///   uniform()      = (x >> 11) * 2^-53                 in [0, 1)
///   open_uniform() = ((x >> 11) + 0.5) * 2^-53         in (0, 1)
///   normal()       = sqrt(-2 ln u1) * cos(2 pi u2)     (Box-Muller, u open)
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double open_uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace banditlan
