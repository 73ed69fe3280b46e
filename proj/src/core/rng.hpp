#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

// Deterministic PRNG helpers. std::<random> distributions are implementation-defined,
// so everything that must reproduce byte-identically across toolchains goes through
// this fixed splitmix64 pipeline.

namespace leoisl {

inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
  splitmix64_next(s);
  return splitmix64_next(s);
}

struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}
  Rng(uint64_t seed, uint64_t stream) : state(mix_seed(seed, stream)) {}

  uint64_t next() { return splitmix64_next(state); }

  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in (0,1], safe for log()
  double u01_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  uint64_t below(uint64_t n) { return next() % n; }

  std::pair<double, double> gauss_pair() {
    double r = std::sqrt(-2.0 * std::log(u01_pos()));
    double th = 2.0 * M_PI * u01();
    return {r * std::cos(th), r * std::sin(th)};
  }
};

}  // namespace leoisl
