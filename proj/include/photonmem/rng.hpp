#pragma once

#include <cmath>
#include <cstdint>

namespace photonmem {

// splitmix64 step; used to expand user seeds into generator state and to
// derive independent sub-stream seeds. Fully portable: output depends only
// on the 64-bit input state, never on platform or library internals.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministically derives the seed of a named sub-stream (channel, shard,
// measurement setting, ...) from a master seed. Two passes of splitmix64
// decorrelate sequential stream ids.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    splitmix64(s);
    return splitmix64(s);
}

// xoshiro256++ with splitmix64 seeding. All sampling helpers are implemented
// by explicit inversion/transform so that identical seeds reproduce identical
// streams on every platform (no implementation-defined std:: distributions).
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = splitmix64(sm);
        }
    }

    std::uint64_t next() {
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

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Exponential with the given mean; strictly positive.
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Poisson count by accumulating exponential waiting times; exact and
    // portable, O(mean).
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) {
            return 0;
        }
        std::uint64_t n = 0;
        double t = exponential(1.0);
        while (t < mean) {
            ++n;
            t += exponential(1.0);
        }
        return n;
    }

    // Standard normal via Box-Muller (both variates used, one cached).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // Avoid log(0).
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace photonmem
