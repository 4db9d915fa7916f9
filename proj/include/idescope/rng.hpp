#pragma once

#include <cstdint>

namespace idescope {

// Counter-based splittable generator built on splitmix64. Every random draw
// in the artifact is a pure function of (seed, stream, counter), so results
// are reproducible regardless of evaluation order.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(mix(mix(seed) ^ stream) ^ counter);
    }

    /// Uniform double in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

    CounterRng split(std::uint64_t substream) const {
        return CounterRng{seed, mix(stream ^ substream)};
    }
};

} // namespace idescope
