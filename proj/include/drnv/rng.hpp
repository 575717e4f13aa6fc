#pragma once

#include <cstdint>
#include <random>

namespace drnv {

/// Reproducible random stream keyed by (master_seed, stream_id).
///
/// Streams are seeded through std::seed_seq so that neighbouring stream ids
/// land on unrelated generator states. A stream is single-owner: parallel
/// code must give every task its own stream_id.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Bernoulli draw with success probability p.
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next_u64() { return engine_(); }

    // UniformRandomBitGenerator, for use with <random> distributions.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace drnv
