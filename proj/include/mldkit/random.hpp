#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace mldkit {

/// Stateless mixer used to derive independent sub-seeds (per repetition, per
/// fold) from one master seed. Same constants as the reference splitmix64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic random source shared by the resamplers and the partitioner.
/// mt19937_64 output is specified bit-for-bit by the standard, and the
/// rejection-sampled index keeps draws identical across platforms, unlike
/// std::uniform_int_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Unbiased uniform draw from [0, bound); bound must be positive.
    std::size_t uniform_index(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t threshold = (0 - b) % b;
        while (true) {
            std::uint64_t r = engine_();
            if (r >= threshold) return static_cast<std::size_t>(r % b);
        }
    }

    /// Fisher-Yates shuffle with draws in a fixed order.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace mldkit
