#pragma once

#include <cstdint>

namespace gaussmax {

/// SplitMix64 finalizer (Vigna / Steele et al.): a 64-bit bijective mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// SplitMix64 generator.  Cheap, splittable, and fully determined by its
/// 64-bit state, which makes replication-indexed seeding trivial.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform draw in the open interval (0,1) with 53-bit resolution;
    /// never returns an endpoint, so inverse-CDF transforms are safe.
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Seed for replication `index` of a run seeded with `seed`.  Each
/// replication owns an independent generator, so any subset of
/// replications can be reproduced in isolation and in parallel.
inline std::uint64_t replication_seed(std::uint64_t seed, long long index) {
    return mix64(seed + (static_cast<std::uint64_t>(index) + 1) * 0x9E3779B97F4A7C15ull);
}

}  // namespace gaussmax
