#pragma once

#include <optional>

#include "unclone/minischeme.hpp"

namespace unclone {

inline constexpr std::size_t kOneTokenBytes = 16;
inline constexpr std::size_t kOneTagBytes = 16;  // the tau tag of a public key
inline constexpr std::size_t kOneNonceBytes = 16;
inline constexpr std::size_t kOneAuthBytes = 16;

/// Mock single-key SDE. Keys are a subspace banknote plus a classical token;
/// encryption binds the message to the token. Correctness only.
struct OneParams {
    int note_qubits = 4;
    int message_bits = 4;
    void validate() const;
    std::size_t message_bytes() const { return (static_cast<std::size_t>(message_bits) + 7) / 8; }
    std::size_t pk_bytes() const;
    std::size_t ct_bytes() const;
};

/// sn || SHA-256(token) || tau, all fixed width.
struct OnePublicKey {
    Bytes data;
    ByteView tag() const { return ByteView(data).last(kOneTagBytes); }
};

struct OneSecretKey {
    Bytes sn;
    Bytes token;
    StateVector note;
};

/// Classically determined: the same randomness always gives the same keys.
std::pair<OnePublicKey, OneSecretKey> one_setup(const OneParams& params, ByteView randomness);

/// nonce || (m xor pad) || auth; the nonce is the first 16 bytes of `randomness`.
Bytes one_enc(const OneParams& params, ByteView pk, ByteView message, ByteView randomness);
/// nullopt on a length or authentication mismatch.
std::optional<Bytes> one_dec(const OneParams& params, const OneSecretKey& sk, ByteView ct);
/// Runs a mini-scheme verification pass on the note first; the key keeps the post-state.
std::optional<Bytes> one_dec_verified(const OneParams& params, OneSecretKey& sk, ByteView ct, Rng& rng);

Bytes encode_message(std::uint64_t m, int message_bits);
std::uint64_t decode_message(ByteView bytes);

}  // namespace unclone
