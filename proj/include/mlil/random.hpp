#ifndef MLIL_RANDOM_HPP
#define MLIL_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>

#include "mlil/error.hpp"

namespace mlil {

/// splitmix64 mixing step. Used to derive independent child seeds from a
/// master seed; the output stream is fixed by the algorithm, not by the
/// standard library implementation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for member/fold `index` of a run seeded with `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the
/// standard, and all derived draws below avoid std::*_distribution (whose
/// mappings are implementation-defined), so identical seeds give identical
/// streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling, unbiased.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw data_error("uniform_index: empty range");
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    /// Index drawn with probability weights[i] / sum(weights). Weights must be
    /// non-negative with a strictly positive sum. CDF scan in index order; the
    /// last positive-weight entry backstops floating-point edge cases.
    std::size_t weighted_index(std::span<const double> weights, double total) {
        const double r = uniform01() * total;
        double acc = 0.0;
        std::size_t last_positive = weights.size();
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            acc += weights[i];
            last_positive = i;
            if (r < acc) return i;
        }
        if (last_positive == weights.size())
            throw data_error("weighted_index: all weights are zero");
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace mlil

#endif
