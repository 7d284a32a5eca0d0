#pragma once

#include <cstdint>

namespace labelrec {

// SplitMix64: one 64-bit word of state, advanced once per draw. Chosen so
// that seeded runs reproduce bit-exactly across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return uniform() < prob; }

  // Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::uint64_t state_;
};

// Stateless 64-bit mixer (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream seed for (base, tag); used to keep truth sampling,
// observation noise and solver initialization on separate streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return mix64(base + tag * 0x9e3779b97f4a7c15ULL);
}

}  // namespace labelrec
