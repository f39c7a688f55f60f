#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace qfs {

// Deterministic RNG used everywhere randomness is needed.
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// fixed by the C++ standard, and doubles are produced with the canonical
// 53-bit mapping (x >> 11) * 2^-53 rather than std::uniform_real_distribution
// (whose algorithm is implementation-defined). Together these make every
// sampled result reproducible across compilers and platforms from the seed
// alone. The identity string below is recorded in run manifests.
class Rng {
 public:
  static constexpr const char* kAlgorithmId = "mt19937_64/canonical53";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent child seeds so that
// concurrent or repeated sub-experiments never share an engine stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for stream `stream` of a master seed. Distinct streams give
// statistically independent engines; the mapping is pure so any stream can
// be reproduced in isolation.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

}  // namespace qfs
