#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unclone/bytes.hpp"
#include "unclone/hash.hpp"
#include "unclone/rng.hpp"

namespace unclone {

class PuncturedPointError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kPprfMaxInputBits = 64;

/// GGM tree key. Input bits are consumed from the most significant end; the
/// children of a node with seed s are H(0x00 || s) and H(0x01 || s), and a
/// leaf is expanded to the output length with the 0x02 tag.
class PprfKey {
public:
    PprfKey(Digest root, int input_bits, int output_bits);
    static PprfKey generate(int input_bits, int output_bits, Rng& rng);

    int input_bits() const { return input_bits_; }
    int output_bits() const { return output_bits_; }
    const Digest& root() const { return root_; }

    /// ceil(output_bits / 8) bytes; bits past output_bits in the last byte are zero.
    Bytes eval(std::uint64_t x) const;
    /// Convenience for 1..64 bit outputs, read big-endian.
    std::uint64_t eval_bits(std::uint64_t x) const;

    /// u32 input_bits, u32 output_bits, 32-byte root.
    Bytes serialize() const;
    static PprfKey deserialize(ByteView data);

    friend bool operator==(const PprfKey&, const PprfKey&) = default;

private:
    Digest root_;
    int input_bits_;
    int output_bits_;
};

/// Position of a tree node: `depth` leading input bits equal to `prefix`.
struct NodeId {
    int depth;
    std::uint64_t prefix;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

class PuncturedKey {
public:
    int input_bits() const { return input_bits_; }
    int output_bits() const { return output_bits_; }
    const std::vector<std::uint64_t>& punctured_set() const { return punctured_; }
    /// Ordered by (depth, prefix).
    const std::map<NodeId, Digest>& copath() const { return copath_; }

    /// Throws PuncturedPointError for x in the punctured set.
    Bytes eval(std::uint64_t x) const;
    std::uint64_t eval_bits(std::uint64_t x) const;

    /// u32 input_bits, u32 output_bits, u32 |S|, S as u64s (sorted),
    /// u32 node count, then (u32 depth, u64 prefix, 32-byte seed) per node.
    Bytes serialize() const;
    static PuncturedKey deserialize(ByteView data);

    friend PuncturedKey puncture(const PprfKey& key, std::vector<std::uint64_t> points);

private:
    PuncturedKey() = default;

    int input_bits_ = 0;
    int output_bits_ = 0;
    std::vector<std::uint64_t> punctured_;
    std::map<NodeId, Digest> copath_;
};

/// Requires a non-empty set of at most 64 distinct in-range points.
PuncturedKey puncture(const PprfKey& key, std::vector<std::uint64_t> points);

namespace ggm {

Digest child(const Digest& seed, int bit);
/// Walks `depth` bits of `path` (right-aligned) down from `seed`.
Digest descend(Digest seed, std::uint64_t path, int depth);
Bytes leaf_output(const Digest& leaf, int output_bits);

}  // namespace ggm

}  // namespace unclone
