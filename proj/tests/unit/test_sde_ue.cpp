#include <doctest.h>

#include <set>

#include "../oracles.hpp"
#include "unclone/games.hpp"
#include "unclone/minischeme.hpp"
#include "unclone/ue.hpp"

using namespace unclone;

namespace {

SdeParams small_sde() {
    SdeParams p;
    p.one.note_qubits = 4;
    p.one.message_bits = 4;
    return p;
}

oracle::OneLayout layout_of(const OneParams& p) { return {p.note_qubits, p.message_bits}; }

Bytes with_tag(Bytes pk, std::uint8_t last) {
    pk.back() = last;
    return pk;
}

}  // namespace

TEST_SUITE("sde_ue") {

TEST_CASE("mock FE rejects forged keys and altered ciphertexts") {
    Rng rng(61);
    auto fe = MockFe::setup(rng);
    const Bytes desc = {1, 2, 3};
    const auto fsk = fe->kg(desc, [](ByteView x) { return Bytes(x.begin(), x.end()); });
    const Bytes ct = fe_enc(fe->pk(), Bytes{9, 8, 7});
    CHECK(ct == oracle::cat(Bytes{9, 8, 7}, oracle::hmac(fe->pk(), Bytes{9, 8, 7})));
    CHECK(ct.size() == fe_ciphertext_size(3));
    CHECK(fe->dec(fsk, ct) == Bytes{9, 8, 7});
    CHECK(fsk.handle == oracle::tagged(0x06, desc));

    FeFunctionKey forged = fsk;
    forged.mac[0] ^= 1;
    CHECK(!fe->dec(forged, ct));
    FeFunctionKey unknown = fsk;
    unknown.handle = oracle::tagged(0x06, Bytes{4});
    CHECK(!fe->dec(unknown, ct));
    Bytes bad = ct;
    bad[0] ^= 1;
    CHECK(!fe->dec(fsk, bad));

    // Re-registering keeps the first function and returns the same key.
    const auto again = fe->kg(desc, [](ByteView) { return Bytes{0}; });
    CHECK(again.mac == fsk.mac);
    CHECK(fe->dec(again, ct) == Bytes{9, 8, 7});
    CHECK(fe->registered() == 1);

    const auto throwing = fe->kg(Bytes{5}, [](ByteView) -> Bytes { throw std::invalid_argument("no"); });
    CHECK(!fe->dec(throwing, ct));
}

TEST_CASE("single-key encryption matches its byte layout") {
    const OneParams p{4, 12};
    const auto [pk, sk] = one_setup(p, Bytes(32, 7));
    CHECK(pk.data.size() == p.pk_bytes());
    CHECK(pk.data.size() == layout_of(p).pk_bytes());
    const Bytes m = encode_message(0xABC, 12);
    const Bytes r(16, 0x42);
    const Bytes ct = one_enc(p, pk.data, m, r);
    CHECK(ct == oracle::one_enc(layout_of(p), pk.data, m, r));
    CHECK(ct.size() == p.ct_bytes());
    CHECK(one_dec(p, sk, ct) == m);
    Bytes bad = ct;
    bad[17] ^= 1;
    CHECK(!one_dec(p, sk, bad));
    CHECK(!one_dec(p, sk, ByteView(ct).first(ct.size() - 1)));

    const auto [pk2, sk2] = one_setup(p, Bytes(32, 7));
    CHECK(pk2.data == pk.data);
    CHECK(sk2.token == sk.token);
    CHECK(!one_dec(p, one_setup(p, Bytes(32, 8)).second, ct));
}

TEST_CASE("verified decryption checks the note first") {
    Rng rng(62);
    const OneParams p{4, 4};
    auto [pk, sk] = one_setup(p, Bytes(32, 1));
    const Bytes ct = one_enc(p, pk.data, encode_message(5, 4), Bytes(16, 3));
    CHECK(one_dec_verified(p, sk, ct, rng) == encode_message(5, 4));
    const Subspace a = *Subspace::parse(sk.sn);
    std::uint32_t outside = 0;
    while (a.contains(outside)) ++outside;
    sk.note = StateVector::basis(4, outside);
    CHECK(!one_dec_verified(p, sk, ct, rng));
}

TEST_CASE("re-encryption circuit matches the oracle in every mode") {
    Rng rng(63);
    const ReLayout layout{OneParams{4, 8}};
    const auto [pk, sk] = one_setup(layout.one, Bytes(32, 5));
    const Bytes ct_star = one_enc(layout.one, pk.data, encode_message(0x11, 8), Bytes(16, 9));
    const std::uint8_t tau = pk.data.back();
    std::set<Bytes> outputs;
    for (std::uint8_t mode : {0, 1, 2}) {
        for (int delta : {-1, 0, 1}) {
            const ReInput in{encode_message(0xC3, 8), PprfKey::generate(64, 128, rng), mode,
                             with_tag(pk.data, static_cast<std::uint8_t>(tau + delta)), ct_star};
            const Bytes raw = in.serialize();
            CHECK(raw.size() == layout.size());
            const Bytes got = re_eval(layout, pk.data, raw);
            CHECK(got == oracle::re_eval(oracle::OneLayout{4, 8}, pk.data, raw));
            outputs.insert(got);
        }
    }
    CHECK(outputs.size() > 3);
    ReInput bad{encode_message(0, 8), PprfKey::generate(64, 128, rng), 3, pk.data, ct_star};
    CHECK_THROWS_AS(re_eval(layout, pk.data, bad.serialize()), std::invalid_argument);
    CHECK_THROWS_AS(ReInput::parse(layout, Bytes(5)), ParseError);
}

TEST_CASE("re-encryption randomness uses the hashed public key") {
    Rng rng(64);
    const PprfKey k = PprfKey::generate(kReKeyInputBits, kReKeyOutputBits, rng);
    const Bytes pk = {1, 2, 3, 4};
    const Bytes h = oracle::sha256(pk);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = x << 8 | h[i];
    CHECK(re_randomness(k, pk) == k.eval(x));
}

TEST_CASE("SDE round trip under every key") {
    Rng rng(65);
    const SdeParams params = small_sde();
    auto [pk, msk] = sde_setup(params, rng);
    std::vector<SdeSecretKey> keys;
    std::set<Bytes> tags;
    for (int i = 0; i < 4; ++i) {
        keys.push_back(sde_kg(msk, rng));
        tags.insert(Bytes(keys.back().one_pk.tag().begin(), keys.back().one_pk.tag().end()));
    }
    CHECK(tags.size() == 4);
    for (std::uint64_t m = 0; m < 16; ++m) {
        const Bytes ct = sde_enc(pk, m, rng);
        CHECK(ct.size() == params.ct_bytes());
        for (const auto& k : keys) CHECK(sde_dec(k, ct) == encode_message(m, 4));
    }
    const Bytes ct = sde_enc(pk, 3, rng);
    Bytes bad = ct;
    bad[1] ^= 0x10;
    CHECK(!sde_dec(keys[0], bad));
    CHECK_THROWS(sde_enc(pk, 16, rng));

    const Bytes r(32, 4);
    const auto a = sde_kg(msk, r);
    const auto b = sde_kg(msk, r);
    CHECK(a.one_pk.data == b.one_pk.data);
    CHECK(a.fsk.handle == b.fsk.handle);

    // A key from another master key cannot decrypt.
    auto [pk2, msk2] = sde_setup(params, rng);
    CHECK(!sde_dec(sde_kg(msk2, rng), ct));
}

TEST_CASE("UE and UE' round trip") {
    Rng rng(66);
    const UeParams params{small_sde()};
    auto [ek, dk] = ue_kg(params, rng);
    CHECK(dk.size() == params.dk_bytes());
    for (std::uint64_t m = 0; m < 16; ++m) {
        const auto ct = ue_enc(ek, encode_message(m, 4), rng);
        CHECK(ue_dec(dk, ct) == encode_message(m, 4));
    }
    const Bytes r(32, 2);
    const Bytes m = encode_message(6, 4);
    CHECK(identical(ue_enc(ek, m, r), ue_enc(ek, m, r)));
    CHECK(!identical(ue_enc(ek, m, r), ue_enc(ek, m, Bytes(32, 3))));

    auto [ek2, dk2] = ue_kg(params, rng);
    const auto other = ue_dec(dk2, ue_enc(ek, m, rng));
    CHECK((!other || *other != m));

    const Bytes s = ue_prime_kg(params, rng);
    CHECK(s.size() == params.dk_bytes());
    const auto ct = ue_prime_enc(params, s, m, rng);
    CHECK(ue_prime_dec(s, ct) == m);
    CHECK(ue_prime_dec(ue_prime_kg(params, rng), ct) != m);
}

TEST_CASE("game names and configuration") {
    for (auto g : {GameName::kStrongAntiPiracy, GameName::kStrongSearch, GameName::kIdenticalChallenge,
                   GameName::kMultiChallengeUe, GameName::kMultiCopyUe}) {
        CHECK(parse_game_name(to_string(g)) == g);
    }
    CHECK_THROWS(parse_game_name("tag"));
    GameConfig c;
    c.params = small_sde();
    CHECK_NOTHROW(c.validate());
    c.q = kGameMaxQ + 1;
    CHECK_THROWS(c.validate());
    c.q = 1;
    c.gamma = 0.0;
    CHECK_THROWS(c.validate());
    CHECK(adversary_names(GameName::kStrongSearch).size() == 3);
    CHECK(adversary_names(GameName::kMultiCopyUe).size() == 2);
    CHECK_THROWS(make_ue_adversary("honest-forwarder", c));
}

TEST_CASE("control adversaries hit their reference rates") {
    Rng rng(67);
    GameConfig c;
    c.params = small_sde();
    c.q = 1;
    for (auto g : {GameName::kStrongAntiPiracy, GameName::kStrongSearch, GameName::kIdenticalChallenge}) {
        c.name = g;
        CHECK(run_game_trials(c, "perfect-copies", 5, rng).rate == 1.0);
        const auto honest = run_game_trials(c, "honest-forwarder", 40, rng);
        if (g != GameName::kIdenticalChallenge) CHECK(honest.rate == 0.0);
        CHECK(std::abs(honest.rate - honest.reference) <= 5 * std::sqrt(honest.reference * (1 - honest.reference) / 40) + 1e-12);
    }
    for (auto g : {GameName::kMultiChallengeUe, GameName::kMultiCopyUe}) {
        c.name = g;
        CHECK(run_game_trials(c, "perfect-copies", 5, rng).rate == 1.0);
        const auto junk = run_game_trials(c, "junk", 400, rng);
        CHECK(junk.reference == doctest::Approx(1.0 / 256));
        CHECK(junk.successes <= 10);
    }
}

TEST_CASE("transcripts follow the game steps") {
    Rng rng(68);
    GameConfig c;
    c.params = small_sde();
    c.q = 2;
    c.name = GameName::kStrongSearch;
    const auto s = run_sde_game(c, make_sde_adversary("perfect-copies", c), rng);
    REQUIRE(s.transcript.size() == 7);
    CHECK(s.transcript[0] == "1 setup; send pk");
    CHECK(s.transcript[1] == "2 keygen x2; send keys");
    CHECK(s.transcript[2] == "3 receive 3 decryptors");
    CHECK(s.transcript.back() == "output 1");
    CHECK(s.eigenvalues.size() == 3);
    for (double e : s.eigenvalues) CHECK(e == doctest::Approx(1.0));

    c.name = GameName::kMultiCopyUe;
    const auto u = run_ue_game(c, make_ue_adversary("perfect-copies", c), rng);
    CHECK(u.transcript[2] == "3 sample m; encrypt once; send 2 copies");
    CHECK(u.bits.size() == 3);
    CHECK_THROWS(run_sde_game(c, make_sde_adversary("junk", c), rng));
}

TEST_CASE("copies handed out by the multi-copy game are identical") {
    Rng rng(69);
    GameConfig c;
    c.params = small_sde();
    c.q = 3;
    c.name = GameName::kMultiCopyUe;
    bool all_same = false;
    const UeAdversary probe = [&](std::span<const UeCiphertext> cts, Rng&) {
        all_same = identical(cts[0], cts[1]) && identical(cts[1], cts[2]);
        return make_ue_adversary("junk", c)(cts, rng);
    };
    run_ue_game(c, probe, rng);
    CHECK(all_same);
    c.name = GameName::kMultiChallengeUe;
    run_ue_game(c, probe, rng);
    CHECK(!all_same);
}

TEST_CASE("adversaries must return q + 1 decryptors") {
    Rng rng(70);
    GameConfig c;
    c.params = small_sde();
    c.q = 2;
    const SdeAdversary short_sde = [&](const SdePublicKey& pk, std::span<const SdeSecretKey> keys, Rng& r) {
        auto out = make_sde_adversary("honest-forwarder", c)(pk, keys, r);
        out.decryptors.pop_back();
        return out;
    };
    CHECK_THROWS_AS(run_sde_game(c, short_sde, rng), AdversaryArityError);
    c.name = GameName::kMultiChallengeUe;
    const UeAdversary short_ue = [&](std::span<const UeCiphertext> cts, Rng& r) {
        auto out = make_ue_adversary("junk", c)(cts, r);
        out.decryptors.pop_back();
        return out;
    };
    CHECK_THROWS_AS(run_ue_game(c, short_ue, rng), AdversaryArityError);
}

}  // TEST_SUITE
