#include "unclone/sde.hpp"

#include <algorithm>
#include <compare>
#include <stdexcept>

#include "unclone/hash.hpp"

namespace unclone {

Bytes ReInput::serialize() const {
    const Bytes key = k.serialize();
    const std::uint8_t mode_byte = mode;
    return concat({m, key, ByteView(&mode_byte, 1), pk_prime, ct_star});
}

ReInput ReInput::parse(const ReLayout& layout, ByteView data) {
    if (data.size() != layout.size()) throw ParseError("RE input has wrong length");
    ByteReader r(data);
    const ByteView m = r.take(layout.one.message_bytes());
    PprfKey k = PprfKey::deserialize(r.take(kReKeyBytes));
    if (k.input_bits() != kReKeyInputBits || k.output_bits() != kReKeyOutputBits) {
        throw ParseError("RE input key has wrong shape");
    }
    const std::uint8_t mode = r.u8();
    const ByteView pk = r.take(layout.one.pk_bytes());
    const ByteView ct = r.take(layout.one.ct_bytes());
    r.expect_done();
    return {Bytes(m.begin(), m.end()), std::move(k), mode, Bytes(pk.begin(), pk.end()), Bytes(ct.begin(), ct.end())};
}

Bytes re_randomness(const PprfKey& k, ByteView one_pk) {
    const Digest d = sha256(one_pk);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = (x << 8) | d[i];
    return k.eval(x);
}

Bytes re_eval(const ReLayout& layout, ByteView one_pk, ByteView input) {
    const ReInput in = ReInput::parse(layout, input);
    const Bytes r = re_randomness(in.k, one_pk);
    const Bytes zero(layout.one.message_bytes(), 0);
    const ByteView tau = one_pk.last(kOneTagBytes);
    const ByteView tau_prime = ByteView(in.pk_prime).last(kOneTagBytes);
    // Tags compare lexicographically as byte strings.
    const auto order = std::lexicographical_compare_three_way(tau.begin(), tau.end(), tau_prime.begin(), tau_prime.end());
    const int cmp = order < 0 ? -1 : (order > 0 ? 1 : 0);
    switch (static_cast<ReMode>(in.mode)) {
        case ReMode::kNormal:
            return one_enc(layout.one, one_pk, in.m, r);
        case ReMode::kCompare:
            return one_enc(layout.one, one_pk, cmp <= 0 ? ByteView(zero) : ByteView(in.m), r);
        case ReMode::kEmbed:
            if (cmp == 0) return in.ct_star;
            return one_enc(layout.one, one_pk, cmp < 0 ? ByteView(zero) : ByteView(in.m), r);
    }
    throw std::invalid_argument("RE: unknown mode");
}

std::pair<SdePublicKey, SdeMasterKey> sde_setup(const SdeParams& params, Rng& rng) {
    params.validate();
    auto fe = MockFe::setup(rng);
    SdePublicKey pk{params, fe->pk()};
    return {std::move(pk), SdeMasterKey{params, std::move(fe)}};
}

SdeSecretKey sde_kg(const SdeMasterKey& msk, ByteView randomness) {
    auto [one_pk, one_sk] = one_setup(msk.params.one, randomness);
    const ReLayout layout{msk.params.one};
    FeFunction re = [layout, pk = one_pk.data](ByteView x) { return re_eval(layout, pk, x); };
    FeFunctionKey fsk = msk.fe->kg(one_pk.data, std::move(re));
    return {msk.params, std::move(one_pk), std::move(one_sk), std::move(fsk)};
}

SdeSecretKey sde_kg(const SdeMasterKey& msk, Rng& rng) {
    const Bytes r = rng.bytes(32);
    return sde_kg(msk, r);
}

Bytes sde_enc(const SdePublicKey& pk, ByteView message, Rng& rng) {
    const auto& one = pk.params.one;
    if (message.size() != one.message_bytes()) throw std::invalid_argument("sde enc: message has wrong length");
    ReInput in{Bytes(message.begin(), message.end()), PprfKey::generate(kReKeyInputBits, kReKeyOutputBits, rng),
               static_cast<std::uint8_t>(ReMode::kNormal), Bytes(one.pk_bytes(), 0), Bytes(one.ct_bytes(), 0)};
    return fe_enc(pk.fe_pk, in.serialize());
}

Bytes sde_enc(const SdePublicKey& pk, std::uint64_t message, Rng& rng) {
    return sde_enc(pk, encode_message(message, pk.params.message_bits()), rng);
}

std::optional<Bytes> sde_dec(const SdeSecretKey& sk, ByteView ct) {
    if (!sk.fsk.evaluator) return std::nullopt;
    const auto one_ct = sk.fsk.evaluator->dec(sk.fsk, ct);
    if (!one_ct) return std::nullopt;
    return one_dec(sk.params.one, sk.one_sk, *one_ct);
}

}  // namespace unclone
