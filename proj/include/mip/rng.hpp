#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mip {

/** Derive an independent stream seed from (seed, k).  splitmix64 finalizer;
 *  stable across platforms. */
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/** Deterministic random stream.  The generator (mt19937_64) and the
 *  variate transforms below are all pinned by the standard or written out
 *  here, so sequences are reproducible across compilers and platforms —
 *  unlike std::normal_distribution, which is implementation-defined. */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix_seed(seed, 0)) {}

    std::uint64_t bits() { return gen_(); }

    /** Uniform on [0,1) with 53 random bits. */
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /** Uniform on [lo,hi). */
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /** Integer uniform on [0,m) by rejection (unbiased). */
    std::uint64_t below(std::uint64_t m) {
        std::uint64_t threshold = (0 - m) % m;  // 2^64 mod m
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= threshold) return r % m;
        }
    }

    /** Standard normal via Box-Muller (pairs cached). */
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        // Guard against log(0); 2^-53 keeps the tail finite.
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mip
