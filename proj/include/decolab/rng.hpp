#pragma once

// Deterministic random numbers. Every sampled experiment in this project is
// reproducible from its integer seed alone, on any platform, so the generator
// is fixed by contract rather than delegated to the standard library:
//
//   - stream:   splitmix64 (Vigna's 64-bit mixer)
//   - uniform:  (next() >> 11) * 2^-53, giving a double in [0, 1)
//   - gaussian: Box-Muller, consuming exactly two uniforms per draw
//               (the sine mate is discarded, never cached)
//
// Per-run streams are derived as seed + run_index.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace decolab {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian(double mean, double sd) {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // keep log() finite
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace decolab
