#ifndef FAIRTASK_RANDOM_HPP_
#define FAIRTASK_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace fairtask {

/// SplitMix64 finalizer; a good 64-bit mixer for keyed streams.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent seed for a named sub-stream of a run.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ tag);
}

/// Top 53 bits as a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Unbiased index in [0, n) from a 64-bit engine, identical across standard
/// libraries (unlike std::uniform_int_distribution).
inline std::uint64_t bounded_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace fairtask

#endif  // FAIRTASK_RANDOM_HPP_
