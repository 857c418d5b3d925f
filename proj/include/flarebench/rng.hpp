#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace flarebench {

/// Small deterministic generator (splitmix64). Used everywhere randomness is
/// needed so that equal seeds give bit-identical results on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi].
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
};

/// Mixes several values into one seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    SplitMix64 g(a ^ (b * 0x9e3779b97f4a7c15ull) ^ (c * 0xc2b2ae3d27d4eb4full));
    return g.next_u64();
}

/// Draws `count` distinct indices from [0, population) without replacement,
/// returned in increasing order. Deterministic in the seed.
inline std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                          std::size_t count,
                                                          std::uint64_t seed) {
    std::vector<std::size_t> pool(population);
    for (std::size_t i = 0; i < population; ++i) pool[i] = i;
    SplitMix64 g(seed);
    // Partial Fisher-Yates: the first `count` slots end up as the sample.
    for (std::size_t i = 0; i < count && i < population; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(g.next_below(population - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count < population ? count : population);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace flarebench
