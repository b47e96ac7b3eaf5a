#pragma once

#include <cstdint>

namespace ssgman {

// Deterministic splitmix64 generator. Hand-rolled (instead of <random>
// distributions) so that seeded runs produce identical streams across
// standard library implementations; CSV determinism depends on this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Seed derivation for independent sub-streams, e.g. (game seed, step,
  // restart). Inner-solver seeds must never depend on the attack plan.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    Rng r(seed);
    std::uint64_t h = r.next_u64();
    h ^= Rng(a ^ 0xa5a5a5a5a5a5a5a5ULL).next_u64() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= Rng(b ^ 0x5a5a5a5a5a5a5a5aULL).next_u64() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= Rng(c ^ 0x3c3c3c3c3c3c3c3cULL).next_u64() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ssgman
