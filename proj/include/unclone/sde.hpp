#pragma once

#include <memory>
#include <optional>

#include "unclone/mock_fe.hpp"
#include "unclone/one_sde.hpp"
#include "unclone/pprf.hpp"

namespace unclone {

/// Re-encryption PRF: 64-bit inputs (a hash of one.pk), 128-bit outputs.
inline constexpr int kReKeyInputBits = 64;
inline constexpr int kReKeyOutputBits = 128;
inline constexpr std::size_t kReKeyBytes = 8 + 32;  // serialized PprfKey

enum class ReMode : std::uint8_t { kNormal = 0, kCompare = 1, kEmbed = 2 };

/// Field widths of the RE input m || K || mode || pk' || ct*.
struct ReLayout {
    OneParams one;
    std::size_t size() const { return one.message_bytes() + kReKeyBytes + 1 + one.pk_bytes() + one.ct_bytes(); }
};

struct ReInput {
    Bytes m;
    PprfKey k;
    std::uint8_t mode;
    Bytes pk_prime;
    Bytes ct_star;

    Bytes serialize() const;
    /// Throws ParseError on wrong length; the mode byte is not checked here.
    static ReInput parse(const ReLayout& layout, ByteView data);
};

/// F_K(pk): PRF input is the leading 64 bits of SHA-256(pk).
Bytes re_randomness(const PprfKey& k, ByteView one_pk);

/// RE[one_pk] on a serialized input. Throws invalid_argument on an unknown mode.
Bytes re_eval(const ReLayout& layout, ByteView one_pk, ByteView input);

struct SdeParams {
    OneParams one;
    void validate() const { one.validate(); }
    int message_bits() const { return one.message_bits; }
    std::size_t ct_bytes() const { return fe_ciphertext_size(ReLayout{one}.size()); }
};

struct SdePublicKey {
    SdeParams params;
    Bytes fe_pk;
};

struct SdeMasterKey {
    SdeParams params;
    std::shared_ptr<MockFe> fe;
};

struct SdeSecretKey {
    SdeParams params;
    OnePublicKey one_pk;  // kept for inspection; decryption never reads it
    OneSecretKey one_sk;
    FeFunctionKey fsk;
};

std::pair<SdePublicKey, SdeMasterKey> sde_setup(const SdeParams& params, Rng& rng);
/// Deterministic in (msk, randomness).
SdeSecretKey sde_kg(const SdeMasterKey& msk, ByteView randomness);
SdeSecretKey sde_kg(const SdeMasterKey& msk, Rng& rng);
Bytes sde_enc(const SdePublicKey& pk, ByteView message, Rng& rng);
Bytes sde_enc(const SdePublicKey& pk, std::uint64_t message, Rng& rng);
/// nullopt plays the role of the failure symbol.
std::optional<Bytes> sde_dec(const SdeSecretKey& sk, ByteView ct);

}  // namespace unclone
