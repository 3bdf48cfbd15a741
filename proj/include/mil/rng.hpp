#pragma once

#include <cstdint>
#include <random>

namespace mil {

/// Mixes a seed with a salt so derived streams are independent (splitmix64
/// finalizer). Used wherever one user-facing seed fans out into per-run or
/// per-target streams that must not depend on iteration order.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG with explicit bounded draws. std::uniform_int_distribution
/// is implementation-defined, so bounded draws are done by hand to keep results
/// identical across standard libraries.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(uint64_t seed) : eng(seed) {}

    uint64_t next() { return eng(); }

    /// Uniform-ish value in [0, n). n must be positive.
    uint64_t below(uint64_t n) { return next() % n; }

    /// Uniform-ish value in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1) != 0; }
};

} // namespace mil
