#pragma once

#include <cstdint>
#include <cmath>

namespace ivs {

// Counter-based 64-bit generator (splitmix64, Steele et al.). Every draw is a
// pure function of (seed, counter), so identical seeds give bit-identical
// streams regardless of call site or platform word order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit mantissa
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, bound) via rejection-free scaling (bound << 2^64)
    std::uint64_t next_below(std::uint64_t bound) {
        return next_u64() % bound;
    }

    // standard normal via Marsaglia polar method (uses only sqrt/log)
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_uniform() - 1.0;
            v = 2.0 * next_uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double r = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * r;
        have_spare_ = true;
        return u * r;
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 finalizer, used as the mixing step of seed derivation
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Order-sensitive seed combinator: fold `word` into `seed`. Chaining
// combine_seed over a tuple of words yields a collision-resistant per-task
// seed (uniqueness over full experiment grids is asserted in tests).
inline std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t word) {
    return mix64(seed ^ (word + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

} // namespace ivs
