#pragma once

#include <cstdint>

#include "mfglp/types.hpp"

namespace mfglp {

/// Deterministic 64-bit generator (splitmix64). Used instead of the std
/// distributions so that artifacts are byte-reproducible across standard
/// library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream for a substream index (restart, path, ...).
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mix.next_u64();
        return mix;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) {  // in [0, n)
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
    }

    /// Standard normal via Box-Muller (one value per call, cache unused).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Sample an index from nonnegative weights (need not be normalized).
    int categorical(const Vector& weights) {
        double total = weights.sum();
        double u = uniform() * total;
        double acc = 0.0;
        int fallback = 0;
        for (int i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            acc += weights[i];
            fallback = i;
            if (u < acc) return i;
        }
        return fallback;  // u landed in the rounding gap at the top
    }

  private:
    std::uint64_t state_;
};

}  // namespace mfglp
