#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sft {

// Seeded random stream. Wraps std::mt19937_64 (whose output sequence is fixed
// by the standard) and draws variates with explicit formulas instead of the
// implementation-defined <random> distributions, so a given seed produces the
// same values with every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Substream keyed by (master_seed, keys...). Streams with different keys are
  // statistically independent and do not depend on the order they are made in.
  static Rng substream(std::uint64_t master_seed,
                       std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix(master_seed ^ 0x243f6a8885a308d3ULL);
    for (std::uint64_t k : keys) h = mix(h ^ mix(k + 0x9e3779b97f4a7c15ULL));
    return Rng(h);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  unsigned binomial(unsigned trials, double p) {
    unsigned k = 0;
    for (unsigned i = 0; i < trials; ++i) k += bernoulli(p) ? 1u : 0u;
    return k;
  }

  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
      const auto j = static_cast<decltype(i)>(uniform_index(static_cast<std::uint64_t>(i) + 1));
      std::swap(first[i], first[j]);
    }
  }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace sft
