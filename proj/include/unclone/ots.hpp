#pragma once

#include <cstdint>

#include "unclone/bytes.hpp"
#include "unclone/hash.hpp"
#include "unclone/rng.hpp"

namespace unclone {

inline constexpr std::size_t kOtsBlock = 32;
inline constexpr int kOtsDefaultDigestBits = 256;

/// Lamport keys over an L-bit message digest (the first L bits of SHA-256(m)).
///
/// Layouts are raw concatenations: sk and vk hold 2*L blocks ordered
/// [b=0: i=0..L-1][b=1: i=0..L-1]; a signature holds L blocks.
struct OtsVerifyKey {
    int digest_bits = kOtsDefaultDigestBits;
    Bytes data;

    std::size_t size() const { return data.size(); }
    friend bool operator==(const OtsVerifyKey&, const OtsVerifyKey&) = default;
};

struct OtsSecretKey {
    int digest_bits = kOtsDefaultDigestBits;
    Bytes data;
};

struct OtsKeypair {
    OtsVerifyKey vk;
    OtsSecretKey sk;
};

std::size_t ots_vk_size(int digest_bits);
std::size_t ots_sig_size(int digest_bits);

/// Keys derived deterministically from a 32-byte seed (CSIG.Setup with explicit coins).
OtsKeypair ots_keygen(ByteView seed, int digest_bits = kOtsDefaultDigestBits);
OtsKeypair ots_gen(Rng& rng, int digest_bits = kOtsDefaultDigestBits);

Bytes ots_sign(const OtsSecretKey& sk, ByteView message);
/// False on any length or content mismatch.
bool ots_verify(const OtsVerifyKey& vk, ByteView message, ByteView sig);
/// Same check on a raw verification key, without copying.
bool ots_verify(int digest_bits, ByteView vk, ByteView message, ByteView sig);

/// Digest bit i of message m, MSB-first.
bool ots_digest_bit(const Digest& d, int i);

}  // namespace unclone
