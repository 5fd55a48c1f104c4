#pragma once

#include <cstdint>
#include <vector>

namespace specsparse {

// splitmix64: the fixed 64-bit mixing generator used everywhere randomness is
// needed. Chosen so that "random" instances and shift orders are reproducible
// bit-for-bit across platforms and languages from the seed alone.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [-1, 1).
    double next_pm1() { return 2.0 * next_unit() - 1.0; }

    /// Uniform integer in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

/// Seeded Fisher-Yates shuffle. Deterministic given (values, seed).
template <typename T>
inline void shuffle(std::vector<T>& values, std::uint64_t seed) {
    SplitMix64 rng(seed);
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(values[i - 1], values[j]);
    }
}

} // namespace specsparse
