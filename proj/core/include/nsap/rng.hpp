#pragma once

#include <cstdint>
#include <utility>

namespace nsap {

/// Counter-based deterministic generator: every draw is a pure function of
/// (seed, counter), so fields built from it are reproducible bit-for-bit on
/// a given platform regardless of evaluation order.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t counter) const {
        // splitmix64 finalizer over a seed/counter mix
        std::uint64_t z = seed_ + counter * 0x9E3779B97F4A7C15ull + 0xBF58476D1CE4E5B9ull;
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t counter, double a, double b) const {
        return a + (b - a) * uniform(counter);
    }

    /// Standard normal pair via Box-Muller on counters (c, c+1).
    std::pair<double, double> gaussian_pair(std::uint64_t counter) const;

  private:
    std::uint64_t seed_;
};

}  // namespace nsap
