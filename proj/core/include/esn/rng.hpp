#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace esn {

/// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives one well-spread seed from a base seed and two indices.
/// Nearby (a, b) pairs map to unrelated streams; the mapping is fixed,
/// so derived seeds are stable across runs and platforms.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    std::uint64_t h = mix64(base + golden);
    h = mix64(h ^ (golden * (a + 1)));
    h = mix64(h ^ (golden * (b + 1)));
    return h;
}

/// xoshiro256++ pseudo-random generator with Box-Muller gaussian
/// sampling. The shift/rotate core and the SplitMix64 seeding are fixed
/// by this library so that a seed identifies one reproducible stream,
/// independent of platform RNG facilities.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // SplitMix64 stream expands the 64-bit seed into the 256-bit state.
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9E3779B97F4A7C15ull;
            word = mix64(s);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Gaussian sample via Box-Muller; the second value of each pair is
    /// cached and returned by the next call.
    double gaussian(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        // u1 in (0, 1] keeps the log argument positive.
        const double u1 = 1.0 - next_double();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return mean + stddev * radius * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace esn
