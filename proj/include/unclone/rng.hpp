#pragma once

#include <cstdint>
#include <limits>

#include "unclone/bytes.hpp"

namespace unclone {

/// Counter-based splittable generator.
///
/// Output i of a stream is a SplitMix64 finalisation of `key + i * golden`, so
/// a stream is fully described by (key, counter). `split(id)` derives an
/// independent child key without advancing the parent, which lets harnesses
/// hand one stream to every trial and get the same results regardless of the
/// order trials run in. All derived samplers (doubles, normals, bounded ints)
/// are implemented here rather than via <random> distributions so reports are
/// reproducible across standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform();
    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }
    /// Standard normal via Box-Muller.
    double normal();
    Bytes bytes(std::size_t n);

    /// Child stream `id`; does not advance this stream.
    Rng split(std::uint64_t id) const;

private:
    Rng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace unclone
