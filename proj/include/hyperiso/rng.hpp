#pragma once

#include <cstdint>
#include <random>

namespace hyperiso {

/// Seeded generator with a platform-independent bounded draw.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  uint64_t below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  /// Independent child stream for task-local use.
  Rng split() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hyperiso
