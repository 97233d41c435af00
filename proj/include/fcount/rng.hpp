#pragma once

#include <cstdint>

namespace fcount::sampling {

/// Seedable, splittable random stream (xoshiro256++ core seeded by
/// splitmix64 over the (seed, stream_id) pair). Distinct pairs give
/// statistically independent sequences; equal pairs reproduce the exact
/// sequence. One stream must be owned by one worker at a time.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    /// Uniform on the open interval (0, 1).
    double uniform_open();

    /// Uniform integer in [0, bound) without modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Exponential with the given mean.
    double exponential(double mean = 1.0);

    // UniformRandomBitGenerator interface
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }
    result_type operator()() { return next_u64(); }

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

}  // namespace fcount::sampling
