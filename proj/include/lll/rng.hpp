// Seedable, splittable pseudorandom source.
//
// Every trial of an experiment draws from its own stream, derived from
// (master seed, trial index) through a SplitMix64 mix, so results are
// reproducible and independent of how trials are scheduled across threads.
// Bounded draws use rejection sampling instead of std distributions, whose
// outputs are not pinned by the standard.
#pragma once

#include <cstdint>
#include <random>

namespace lll {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  // Independent stream for one trial of an experiment.
  static Rng stream(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t b = splitmix64(s);
    return Rng(a ^ (b + 0x632be59bd9b4e019ULL + (index << 1)));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform draw from {0, ..., k-1}, unbiased.
  int bounded(int k) {
    const std::uint64_t bound = static_cast<std::uint64_t>(k);
    const std::uint64_t min = (-bound) % bound;  // 2^64 mod k
    std::uint64_t r;
    do {
      r = next();
    } while (r < min);
    return static_cast<int>(r % bound);
  }

  // Uniform draw from [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64(s);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace lll
