#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, counter), so matrices can be sampled in any order or in
// parallel and still come out bit-identical.
//
// Streams used by the samplers:
//   kEdgeStream        one counter per upper-triangle entry i*n + j
//   kObservationStream one counter per upper-triangle entry i*n + j
//   kShuffleStream     permutations inside local search

#include <cstdint>
#include <vector>

namespace hsbm::rng {

inline constexpr std::uint64_t kEdgeStream = 1;
inline constexpr std::uint64_t kObservationStream = 2;
inline constexpr std::uint64_t kShuffleStream = 3;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  const std::uint64_t key = mix64(seed ^ mix64(stream * 0xd1b54a32d192ed03ULL));
  return mix64(key ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0,1) with 53 random bits.
constexpr double uniform(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t counter) {
  return double(hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Seed for the index-th child of a base seed (trials, restarts).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(mix64(base) ^ mix64(index * 0xa0761d6478bd642fULL + 1));
}

/// Sequential generator over one (seed, stream) pair.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return hash(seed_, stream_, counter_++); }
  double next_uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = std::size_t(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace hsbm::rng
