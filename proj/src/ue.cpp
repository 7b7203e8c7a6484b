#include "unclone/ue.hpp"

#include <stdexcept>

namespace unclone {

Bytes random_message(int message_bits, Rng& rng) {
    Bytes m = rng.bytes((static_cast<std::size_t>(message_bits) + 7) / 8);
    if (message_bits % 8 != 0) m[0] &= static_cast<std::uint8_t>((1u << (message_bits % 8)) - 1);
    return m;
}

std::pair<UeEncryptionKey, UeDecryptionKey> ue_kg(const UeParams& params, Rng& rng) {
    auto [pk, msk] = sde_setup(params.sde, rng);
    Bytes s = random_message(params.message_bits(), rng);
    Bytes dk = sde_enc(pk, s, rng);
    return {UeEncryptionKey{params, std::move(msk), std::move(s)}, std::move(dk)};
}

UeCiphertext ue_enc(const UeEncryptionKey& ek, ByteView message, ByteView randomness) {
    if (message.size() != ek.params.message_bytes()) throw std::invalid_argument("ue enc: message has wrong length");
    return {sde_kg(ek.msk, randomness), xor_bytes(message, ek.s)};
}

UeCiphertext ue_enc(const UeEncryptionKey& ek, ByteView message, Rng& rng) {
    const Bytes r = rng.bytes(32);
    return ue_enc(ek, message, r);
}

std::optional<Bytes> ue_dec(const UeDecryptionKey& dk, const UeCiphertext& ct) {
    const auto s = sde_dec(ct.sk, dk);
    if (!s || s->size() != ct.mu.size()) return std::nullopt;
    return xor_bytes(ct.mu, *s);
}

bool identical(const UeCiphertext& a, const UeCiphertext& b) {
    return a.mu == b.mu && a.sk.one_pk.data == b.sk.one_pk.data && a.sk.one_sk.sn == b.sk.one_sk.sn &&
           a.sk.one_sk.token == b.sk.one_sk.token && a.sk.fsk.handle == b.sk.fsk.handle && a.sk.fsk.mac == b.sk.fsk.mac &&
           a.sk.one_sk.note.num_qubits() == b.sk.one_sk.note.num_qubits() &&
           a.sk.one_sk.note.amplitudes() == b.sk.one_sk.note.amplitudes();
}

Bytes ue_prime_kg(const UeParams& params, Rng& rng) { return rng.bytes(params.dk_bytes()); }

UePrimeCiphertext ue_prime_enc(const UeParams& params, ByteView s, ByteView message, Rng& rng) {
    if (s.size() != params.dk_bytes()) throw std::invalid_argument("ue' enc: key has wrong length");
    auto [ek, dk] = ue_kg(params, rng);
    UeCiphertext ct = ue_enc(ek, message, rng);
    return {std::move(ct), xor_bytes(dk, s)};
}

std::optional<Bytes> ue_prime_dec(ByteView s, const UePrimeCiphertext& ct) {
    if (s.size() != ct.masked_dk.size()) return std::nullopt;
    return ue_dec(xor_bytes(s, ct.masked_dk), ct.ct);
}

}  // namespace unclone
