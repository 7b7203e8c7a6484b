#pragma once

#include <optional>

#include "unclone/sde.hpp"

namespace unclone {

/// Unclonable encryption from SDE by swapping the roles of keys and ciphertexts.
struct UeParams {
    SdeParams sde;
    int message_bits() const { return sde.message_bits(); }
    std::size_t message_bytes() const { return sde.one.message_bytes(); }
    std::size_t dk_bytes() const { return sde.ct_bytes(); }
};

struct UeEncryptionKey {
    UeParams params;
    SdeMasterKey msk;
    Bytes s;  // one-time pad in the message space
};

/// The decryption key is an SDE ciphertext of s.
using UeDecryptionKey = Bytes;

struct UeCiphertext {
    SdeSecretKey sk;
    Bytes mu;  // m xor s
};

/// Uniform element of {0,1}^bits as big-endian bytes.
Bytes random_message(int message_bits, Rng& rng);

std::pair<UeEncryptionKey, UeDecryptionKey> ue_kg(const UeParams& params, Rng& rng);
/// Classically determined when the randomness is fixed.
UeCiphertext ue_enc(const UeEncryptionKey& ek, ByteView message, ByteView randomness);
UeCiphertext ue_enc(const UeEncryptionKey& ek, ByteView message, Rng& rng);
std::optional<Bytes> ue_dec(const UeDecryptionKey& dk, const UeCiphertext& ct);

/// Classical registers byte-equal and note amplitudes exactly equal.
bool identical(const UeCiphertext& a, const UeCiphertext& b);

/// Variant with ek' = dk' = s, where |s| is the length of a UE decryption key.
struct UePrimeCiphertext {
    UeCiphertext ct;
    Bytes masked_dk;  // dk xor s
};

Bytes ue_prime_kg(const UeParams& params, Rng& rng);
UePrimeCiphertext ue_prime_enc(const UeParams& params, ByteView s, ByteView message, Rng& rng);
std::optional<Bytes> ue_prime_dec(ByteView s, const UePrimeCiphertext& ct);

}  // namespace unclone
