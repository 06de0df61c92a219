#ifndef GAUSSGROUND_RNG_H_
#define GAUSSGROUND_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gg {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a seed and any number of keys into one 64-bit stream seed, so every
// (seed, task, sample, ...) tuple owns an independent generator.
inline std::uint64_t stream_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> keys) {
  return Engine(stream_seed(seed, keys));
}

}  // namespace gg

#endif  // GAUSSGROUND_RNG_H_
