#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mtop {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derives a child seed from a root seed and a path of tags. Used to split one
// run seed into independent per-component streams, so adding a consumer (e.g.
// diagnostics) does not shift the draws seen by another.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t w : path) {
        s = splitmix64(s ^ splitmix64(w + 0xA0761D6478BD642Full));
    }
    return s;
}

namespace seed_tag {
// Stream tags; values are arbitrary but frozen (changing them changes every
// seeded result).
inline constexpr std::uint64_t kEnvironment = 1;
inline constexpr std::uint64_t kAlgorithm = 2;
inline constexpr std::uint64_t kGroundTruth = 3;
inline constexpr std::uint64_t kDiagnostics = 4;
inline constexpr std::uint64_t kRun = 5;
}  // namespace seed_tag

// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
// the standard pins down exactly) and implements all variate generation
// itself, since the std::*_distribution classes are not portable across
// standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound must be nonzero. Modulo bias is
    // below 2^-32 for the bounds used here (< 2^32).
    std::uint64_t uniform_int(std::uint64_t bound) { return next_u64() % bound; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; consumes two words per draw.
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Binomial as an explicit sum of Bernoulli trials; exact and trivially
    // reproducible at the population sizes used here.
    long long binomial(long long n, double p) {
        if (n <= 0 || p <= 0.0) {
            return 0;
        }
        if (p >= 1.0) {
            return n;
        }
        long long successes = 0;
        for (long long i = 0; i < n; ++i) {
            successes += uniform01() < p ? 1 : 0;
        }
        return successes;
    }

    Rng child(std::uint64_t tag) { return Rng(derive_seed(next_u64(), {tag})); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mtop
