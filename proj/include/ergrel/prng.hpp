#pragma once

#include <cstdint>

#include "rational.hpp"

namespace ergrel {

/// splitmix64. Deterministic across platforms, unlike <random> distributions;
/// every seeded experiment and instance generator goes through this.
struct Prng {
    std::uint64_t state;

    explicit Prng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [lo, hi], inclusive.
    long uniform(long lo, long hi) {
        require(lo <= hi, "Prng::uniform: empty range");
        std::uint64_t span = std::uint64_t(hi - lo) + 1;
        return lo + long(next() % span);
    }

    /// Small positive rational p/q with p in [1, max_num], q in [1, max_den].
    Rat positive_rational(long max_num = 8, long max_den = 8) {
        return Rat(uniform(1, max_num), uniform(1, max_den));
    }

    /// Rational in [-max_num, max_num] / [1, max_den].
    Rat signed_rational(long max_num = 8, long max_den = 8) {
        return Rat(uniform(-max_num, max_num), uniform(1, max_den));
    }
};

}  // namespace ergrel
