#pragma once

#include <cstdint>

namespace countsynth {

// SplitMix64. All randomized tooling (game generation, simulation) draws from
// this generator so that a seed reproduces byte-identical output on any
// platform; std::mt19937 distributions are not portable across libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). Plain modulo; the bias is irrelevant at the scales
  // used here and keeps the sequence trivially reproducible.
  uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }

  bool chance(uint32_t percent) { return below(100) < percent; }

 private:
  uint64_t state_;
};

}  // namespace countsynth
