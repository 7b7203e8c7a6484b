#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "unclone/hybrid.hpp"
#include "unclone/ots.hpp"
#include "unclone/pprf.hpp"

namespace unclone {

struct DetsigParams {
    int message_bits = 16;                      // n
    int tag_bits = 128;                         // lambda; a multiple of 8
    int digest_bits = kOtsDefaultDigestBits;    // L of every one-time key

    void validate() const;
};

inline constexpr int kDetsigMaxMessageBits = 56;

struct DetsigVerifyKey {
    DetsigParams params;
    OtsVerifyKey vk_root;

    Bytes serialize() const { return vk_root.data; }
};

struct DetsigSecretKey {
    DetsigParams params;
    OtsSecretKey sk_root;
    PprfKey k;   // prefix -> one-time key seed, 8 + n input bits, 256 output bits
    PprfKey k2;  // message -> lambda-bit tag
};

struct DetsigLink {
    OtsVerifyKey pl0;
    OtsVerifyKey pl1;
    Bytes sigpl;
};

struct TreeSignature {
    std::vector<DetsigLink> links;
    Bytes y;
    Bytes isig;

    /// links in order as pl0 || pl1 || sigpl, then y, then isig; no length prefixes.
    Bytes serialize() const;
    /// nullopt when the length does not match the fixed layout.
    static std::optional<TreeSignature> parse(const DetsigParams& params, ByteView data);
};

std::size_t detsig_signature_size(const DetsigParams& params);

std::pair<DetsigVerifyKey, DetsigSecretKey> detsig_setup(const DetsigParams& params, Rng& rng);

/// Input of F(K, .) for the prefix of length `len` whose bits are the low bits of `prefix`.
std::uint64_t detsig_prefix_input(int message_bits, int len, std::uint64_t prefix);
/// (vk*_a, sk*_a) for a non-empty prefix a.
OtsKeypair detsig_prefix_keypair(const DetsigSecretKey& sk, int len, std::uint64_t prefix);

TreeSignature detsig_sign(const DetsigSecretKey& sk, std::uint64_t message);
bool detsig_verify(const DetsigVerifyKey& vk, std::uint64_t message, const TreeSignature& sig);
bool detsig_verify(const DetsigVerifyKey& vk, std::uint64_t message, ByteView sig);

/// Quantum signing oracle of the plus-one game. A query is a HybridState whose
/// labels are (m, w) with m an encoded message and w a register as wide as a
/// serialized signature; it maps |m>|w> to |m>|w xor Sign(sk, m)>.
class BzSigningOracle {
public:
    BzSigningOracle(const DetsigSecretKey& sk, int budget) : sk_(sk), budget_(budget) {}

    HybridState query(const HybridState& state);
    /// Classical query, counted against the same budget.
    Bytes sign(std::uint64_t message);

    int queries() const { return used_; }
    int budget() const { return budget_; }
    std::size_t message_bytes() const;
    std::size_t signature_bytes() const { return detsig_signature_size(sk_.params); }

private:
    void spend();

    const DetsigSecretKey& sk_;
    int budget_;
    int used_ = 0;
};

class QueryBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using BzOutput = std::vector<std::pair<std::uint64_t, Bytes>>;
using BzAdversary = std::function<BzOutput(const DetsigVerifyKey&, BzSigningOracle&, Rng&)>;

struct BzResult {
    bool success;
    int queries;
    std::size_t pairs;
    bool distinct;
    std::size_t valid;
};

/// The adversary must return exactly k + 1 pairs; it may spend at most
/// `query_budget` oracle queries (the game itself uses query_budget = k).
BzResult bz_game(const DetsigParams& params, int k, int query_budget, const BzAdversary& adversary, Rng& rng);

}  // namespace unclone
