#include "unclone/one_sde.hpp"

#include <openssl/crypto.h>

#include <stdexcept>
#include <string_view>

#include "unclone/hash.hpp"

namespace unclone {

namespace {

ByteView text(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

std::size_t sn_bytes(int n) { return 1 + static_cast<std::size_t>(n / 2) * ((static_cast<std::size_t>(n) + 7) / 8); }

Bytes pad(ByteView token_hash, ByteView nonce, std::size_t n) {
    return expand(HashTag::kMockFe, concat({text("one-pad"), token_hash, nonce}), n);
}

Bytes auth(ByteView token_hash, ByteView nonce, ByteView body) {
    const Digest d = hmac_sha256(token_hash, concat({nonce, body}));
    return Bytes(d.begin(), d.begin() + kOneAuthBytes);
}

}  // namespace

void OneParams::validate() const {
    if (note_qubits < 2 || note_qubits > 8 || note_qubits % 2 != 0) {
        throw std::invalid_argument("one: note qubits must be even in [2, 8]");
    }
    if (message_bits < 1 || message_bits > 64) throw std::invalid_argument("one: message bits must lie in [1, 64]");
}

std::size_t OneParams::pk_bytes() const { return sn_bytes(note_qubits) + 32 + kOneTagBytes; }

std::size_t OneParams::ct_bytes() const { return kOneNonceBytes + message_bytes() + kOneAuthBytes; }

std::pair<OnePublicKey, OneSecretKey> one_setup(const OneParams& params, ByteView randomness) {
    params.validate();
    const Bytes material = expand(HashTag::kMockFe, concat({text("one-setup"), randomness}), 64);
    const ByteView m(material);
    MiniBanknote note = mini_gen(params.note_qubits, m.first(32));
    Bytes token(m.begin() + 32, m.begin() + 48);
    const ByteView tau = m.subspan(48, kOneTagBytes);
    OnePublicKey pk{concat({note.sn, view(sha256(token)), tau})};
    return {std::move(pk), OneSecretKey{std::move(note.sn), std::move(token), std::move(note.note)}};
}

Bytes one_enc(const OneParams& params, ByteView pk, ByteView message, ByteView randomness) {
    if (pk.size() != params.pk_bytes()) throw std::invalid_argument("one enc: public key has wrong length");
    if (message.size() != params.message_bytes()) throw std::invalid_argument("one enc: message has wrong length");
    if (randomness.size() < kOneNonceBytes) throw std::invalid_argument("one enc: need 16 bytes of randomness");
    const ByteView token_hash = pk.subspan(sn_bytes(params.note_qubits), 32);
    const ByteView nonce = randomness.first(kOneNonceBytes);
    const Bytes body = xor_bytes(message, pad(token_hash, nonce, message.size()));
    return concat({nonce, body, auth(token_hash, nonce, body)});
}

std::optional<Bytes> one_dec(const OneParams& params, const OneSecretKey& sk, ByteView ct) {
    if (ct.size() != params.ct_bytes()) return std::nullopt;
    const Digest th = sha256(sk.token);
    const ByteView nonce = ct.first(kOneNonceBytes);
    const ByteView body = ct.subspan(kOneNonceBytes, params.message_bytes());
    const Bytes expected = auth(view(th), nonce, body);
    if (CRYPTO_memcmp(expected.data(), ct.last(kOneAuthBytes).data(), kOneAuthBytes) != 0) return std::nullopt;
    return xor_bytes(body, pad(view(th), nonce, body.size()));
}

std::optional<Bytes> one_dec_verified(const OneParams& params, OneSecretKey& sk, ByteView ct, Rng& rng) {
    auto v = mini_verify(ByteView(sk.sn), sk.note, rng);
    sk.note = v.post;
    if (!v.bit) return std::nullopt;
    return one_dec(params, sk, ct);
}

Bytes encode_message(std::uint64_t m, int message_bits) {
    const std::size_t n = (static_cast<std::size_t>(message_bits) + 7) / 8;
    if (message_bits < 64 && (m >> message_bits) != 0) throw std::out_of_range("message wider than the message space");
    Bytes out(n);
    for (std::size_t i = 0; i < n; ++i) out[n - 1 - i] = static_cast<std::uint8_t>(m >> (8 * i));
    return out;
}

std::uint64_t decode_message(ByteView bytes) {
    if (bytes.size() > 8) throw std::out_of_range("message wider than 64 bits");
    std::uint64_t v = 0;
    for (auto b : bytes) v = (v << 8) | b;
    return v;
}

}  // namespace unclone
