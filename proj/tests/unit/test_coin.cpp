#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "unclone/coin.hpp"

using namespace unclone;

namespace {

CoinParams small_coin(CoinVariant variant = CoinVariant::kEqsup) {
    CoinParams p;
    p.variant = variant;
    p.id_bits = 2;
    p.mini_n = 4;
    p.sig.message_bits = 8;
    p.sig.digest_bits = 16;
    return p;
}

// Rewrites the branch with the given id through `edit`.
HybridState edit_branch(const HybridState& s, std::uint64_t id,
                        const std::function<void(Label&, StateVector&)>& edit) {
    return s.map_branches(s.payload_qubits(), [&](const Label& label, const Branch& b) {
        Label l = label;
        StateVector payload = b.payload;
        if (decode_label_value(label[kCoinId]) == id) edit(l, payload);
        return std::vector<HybridState::Term>{{std::move(l), b.amplitude, std::move(payload)}};
    });
}

}  // namespace

TEST_SUITE("coin") {

TEST_CASE("signed message is the truncated tagged hash") {
    const Bytes sn = {1, 2, 3};
    CHECK(coin_message(sn, 16) == 15563);
    const Bytes d = oracle::tagged(0x04, sn);
    CHECK(coin_message(sn, 16) == (std::uint64_t(d[0]) << 8 | d[1]));
    CHECK(coin_message(sn, 5) == std::uint64_t(d[0] >> 3));
}

TEST_CASE("parameter validation and names") {
    CoinParams p = small_coin();
    CHECK_NOTHROW(p.validate());
    p.mini_n = 5;
    CHECK_THROWS(p.validate());
    p = small_coin();
    p.id_bits = kCoinMaxIdBits + 1;
    CHECK_THROWS(p.validate());
    CHECK(parse_coin_variant(to_string(CoinVariant::kPrs)) == CoinVariant::kPrs);
    CHECK(parse_coin_variant(to_string(CoinVariant::kEqsup)) == CoinVariant::kEqsup);
    CHECK_THROWS(parse_coin_variant("gold"));
    CHECK(coin_attack_names().size() == 4);
    CHECK_THROWS(make_coin_attack("forge"));
}

TEST_CASE("honest coins verify with certainty") {
    for (auto variant : {CoinVariant::kEqsup, CoinVariant::kPrs}) {
        Rng rng(51);
        const CoinParams params = small_coin(variant);
        auto [vk, sk] = coin_setup(params, rng);
        const HybridState coin = gen_banknote(sk);
        CHECK(coin.squared_norm() == doctest::Approx(1.0));
        CoinVerifier verifier(vk);
        CHECK(std::abs(verifier.accept_probability(coin) - 1.0) < 1e-12);
        const auto out = verifier.verify(coin, rng);
        CHECK(out.bit);
        CHECK(distance(out.post, coin) < 1e-12);
        // Verification is a projector: a second pass changes nothing.
        CHECK(std::abs(verifier.accept_probability(out.post) - 1.0) < 1e-12);
    }
}

TEST_CASE("branches match the classical recomputation") {
    Rng rng(52);
    auto [vk, sk] = coin_setup(small_coin(CoinVariant::kPrs), rng);
    const HybridState coin = gen_banknote(sk);
    CHECK(coin.size() == 4);
    for (std::uint64_t id = 0; id < 4; ++id) {
        const auto d = coin_branch(sk, id);
        const Label label = {encode_label_value(id, 1), d.note.sn, d.sig};
        const Branch* b = coin.find(label);
        REQUIRE(b);
        CHECK(std::abs(b->amplitude * inner(b->payload, d.note.note) - d.amplitude) < 1e-12);
        CHECK(detsig_verify(vk.vk, coin_message(d.note.sn, 8), d.sig));
    }
}

TEST_CASE("tampered branches lose exactly their weight") {
    Rng rng(53);
    const CoinParams params = small_coin();
    auto [vk, sk] = coin_setup(params, rng);
    const HybridState coin = gen_banknote(sk);
    CoinVerifier verifier(vk);

    const auto bad_sig = edit_branch(coin, 1, [](Label& l, StateVector&) { l[kCoinSig][5] ^= 0x01; });
    CHECK(verifier.accept_probability(bad_sig) == doctest::Approx(0.75));
    CHECK(verifier.accepted_subspace(bad_sig.branches().begin()->first) != nullptr);

    // A zeroed note on one branch passes the subspace check with probability 1/|A|.
    const auto zero_note = edit_branch(coin, 2, [](Label&, StateVector& p) { p = StateVector::basis(4, 0); });
    CHECK(verifier.accept_probability(zero_note) == doctest::Approx(0.75 + 0.25 * 0.25));

    // A valid signature on a different serial number does not transfer. With
    // 35 subspaces two ids can share a serial number, so pick one that differs.
    std::uint64_t other = 1;
    while (coin_branch(sk, other).note.sn == coin_branch(sk, 0).note.sn) ++other;
    const auto swapped = coin_branch(sk, other);
    const auto moved = edit_branch(coin, 0, [&](Label& l, StateVector&) { l[kCoinSig] = swapped.sig; });
    CHECK(verifier.accept_probability(moved) == doctest::Approx(0.75));

    const HybridState wrong = HybridState::product({Bytes{0}, Bytes{1}, Bytes{2}}, StateVector::basis(2, 0));
    CHECK_THROWS_AS(verifier.accept_probability(wrong), DimensionError);
}

TEST_CASE("counterfeit game enforces output arity") {
    Rng rng(54);
    auto [vk, sk] = coin_setup(small_coin(), rng);
    const HybridState coin = gen_banknote(sk);
    CoinVerifier verifier(vk);
    const CoinAttack lazy = [](const CoinVerifyKey&, std::span<const HybridState> coins, Rng&) {
        return std::vector<HybridState>(coins.begin(), coins.end());
    };
    CHECK_THROWS_AS(counterfeit_game(verifier, coin, 2, lazy, rng), AttackArityError);
    CHECK_THROWS(counterfeit_game(verifier, coin, kCoinMaxIssued + 1, make_coin_attack("null"), rng));
    CHECK_THROWS(counterfeit_game(verifier, coin, 0, make_coin_attack("zero-pad"), rng));
    const auto null = counterfeit_game(verifier, coin, 1, make_coin_attack("null"), rng);
    CHECK(!null.success);
    CHECK(null.accept_probabilities.size() == 2);
    CHECK(null.accept_probabilities[0] == doctest::Approx(1.0));
}

TEST_CASE("zero-pad counterfeit rate matches its reference") {
    Rng rng(55);
    const auto r = counterfeit_experiment(small_coin(), 1, "zero-pad", 1500, rng);
    CHECK(r.reference == doctest::Approx(0.25));
    CHECK(r.mean_accept.size() == 2);
    CHECK(std::abs(r.success_rate - r.reference) < 4 * std::sqrt(0.25 * 0.75 / 1500));
}

}  // TEST_SUITE
