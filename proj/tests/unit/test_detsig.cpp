#include <doctest.h>

#include <set>

#include "unclone/detsig.hpp"

using namespace unclone;

namespace {

DetsigParams small_params() {
    DetsigParams p;
    p.message_bits = 4;
    p.digest_bits = 8;
    return p;
}

}  // namespace

TEST_SUITE("detsig") {

TEST_CASE("parameter validation") {
    DetsigParams p = small_params();
    CHECK_NOTHROW(p.validate());
    p.tag_bits = 12;
    CHECK_THROWS(p.validate());
    p = small_params();
    p.message_bits = kDetsigMaxMessageBits + 1;
    CHECK_THROWS(p.validate());
    p = small_params();
    p.digest_bits = 0;
    CHECK_THROWS(p.validate());
}

TEST_CASE("signature size follows the fixed layout") {
    const DetsigParams p = small_params();
    const std::size_t vk = ots_vk_size(8);
    const std::size_t sig = ots_sig_size(8);
    CHECK(vk == 2 * 8 * 32);
    CHECK(sig == 8 * 32);
    CHECK(detsig_signature_size(p) == 4 * (2 * vk + sig) + 16 + sig);
}

TEST_CASE("every message of a 4-bit scheme round trips") {
    Rng rng(21);
    const DetsigParams p = small_params();
    auto [vk, sk] = detsig_setup(p, rng);
    for (std::uint64_t m = 0; m < 16; ++m) {
        const auto sig = detsig_sign(sk, m);
        const Bytes raw = sig.serialize();
        CHECK(raw.size() == detsig_signature_size(p));
        CHECK(detsig_verify(vk, m, sig));
        CHECK(detsig_verify(vk, m, raw));
        CHECK(!detsig_verify(vk, m ^ 1, raw));
        const auto parsed = TreeSignature::parse(p, raw);
        REQUIRE(parsed);
        CHECK(parsed->serialize() == raw);
    }
    CHECK_THROWS(detsig_sign(sk, 16));
    CHECK(!detsig_verify(vk, 16, detsig_sign(sk, 0).serialize()));
}

TEST_CASE("signing is deterministic and the 8-bit scheme verifies") {
    Rng rng(22);
    DetsigParams p;
    p.message_bits = 8;
    p.digest_bits = 16;
    auto [vk, sk] = detsig_setup(p, rng);
    for (std::uint64_t m : {0u, 1u, 127u, 200u, 255u}) {
        const Bytes a = detsig_sign(sk, m).serialize();
        CHECK(a == detsig_sign(sk, m).serialize());
        CHECK(detsig_verify(vk, m, a));
    }
}

TEST_CASE("sibling signatures share the path prefix") {
    Rng rng(23);
    const DetsigParams p = small_params();
    auto [vk, sk] = detsig_setup(p, rng);
    const auto a = detsig_sign(sk, 0b0000);
    const auto b = detsig_sign(sk, 0b0001);
    // Every link certifies children of a shared prefix; only the leaf differs.
    for (int i = 0; i < 4; ++i) {
        CHECK(a.links[i].pl0 == b.links[i].pl0);
        CHECK(a.links[i].sigpl == b.links[i].sigpl);
    }
    CHECK(a.y != b.y);
    const auto c = detsig_sign(sk, 0b1000);
    CHECK(a.links[0].sigpl == c.links[0].sigpl);
    CHECK(a.links[1].sigpl != c.links[1].sigpl);
}

TEST_CASE("prefix inputs are distinct for all prefixes") {
    std::set<std::uint64_t> seen;
    for (int len = 0; len <= 4; ++len) {
        for (std::uint64_t a = 0; a < (1u << len); ++a) CHECK(seen.insert(detsig_prefix_input(4, len, a)).second);
    }
    CHECK_THROWS(detsig_prefix_input(4, 5, 0));
}

TEST_CASE("tampering with any link rejects") {
    Rng rng(24);
    const DetsigParams p = small_params();
    auto [vk, sk] = detsig_setup(p, rng);
    const Bytes raw = detsig_sign(sk, 9).serialize();
    Rng pick(25);
    for (int i = 0; i < 200; ++i) {
        Bytes bad = raw;
        bad[pick.below(bad.size())] ^= static_cast<std::uint8_t>(1u << pick.below(8));
        CHECK(!detsig_verify(vk, 9, bad));
    }
    Bytes short_sig(raw.begin(), raw.end() - 1);
    CHECK(!detsig_verify(vk, 9, short_sig));
    CHECK(!TreeSignature::parse(p, short_sig));
}

TEST_CASE("plus-one game with classical queries") {
    Rng rng(26);
    const DetsigParams p = small_params();
    const int k = 3;
    // Honest replay: k queried pairs cannot be extended without a forgery.
    const BzAdversary replay = [&](const DetsigVerifyKey&, BzSigningOracle& o, Rng&) {
        BzOutput out;
        for (int m = 0; m < k; ++m) out.emplace_back(m, o.sign(m));
        out.emplace_back(k, Bytes(o.signature_bytes(), 0));
        return out;
    };
    const auto r = bz_game(p, k, k, replay, rng);
    CHECK(!r.success);
    CHECK(r.queries == k);
    CHECK(r.valid == std::size_t(k));

    // Control: one extra query makes the plus-one output trivial.
    const BzAdversary greedy = [&](const DetsigVerifyKey&, BzSigningOracle& o, Rng&) {
        BzOutput out;
        for (int m = 0; m <= k; ++m) out.emplace_back(m, o.sign(m));
        return out;
    };
    CHECK(bz_game(p, k, k + 1, greedy, rng).success);
    CHECK_THROWS_AS(bz_game(p, k, k, greedy, rng), QueryBudgetExceeded);

    const BzAdversary duplicate = [&](const DetsigVerifyKey&, BzSigningOracle& o, Rng&) {
        const Bytes s = o.sign(1);
        return BzOutput{{1, s}, {1, s}, {1, s}, {1, s}};
    };
    const auto d = bz_game(p, k, k, duplicate, rng);
    CHECK(!d.distinct);
    CHECK(!d.success);
}

TEST_CASE("quantum oracle XORs signatures into every branch") {
    Rng rng(27);
    const DetsigParams p = small_params();
    auto [vk, sk] = detsig_setup(p, rng);
    BzSigningOracle oracle(sk, 1);
    const Bytes zero(oracle.signature_bytes(), 0);
    std::vector<HybridState::Term> terms;
    const double a = 0.5;
    for (std::uint64_t m : {2u, 5u, 11u, 14u}) {
        terms.push_back({{encode_label_value(m, oracle.message_bytes()), zero}, a, StateVector()});
    }
    const HybridState out = oracle.query(HybridState(0, terms));
    CHECK(oracle.queries() == 1);
    CHECK(out.size() == 4);
    for (const auto& [label, b] : out.branches()) {
        const std::uint64_t m = decode_label_value(label[0]);
        CHECK(detsig_verify(vk, m, label[1]));
        CHECK(std::abs(b.amplitude - Complex(a)) < 1e-12);
    }
    CHECK_THROWS_AS(oracle.query(HybridState(0, terms)), QueryBudgetExceeded);

    BzSigningOracle fresh(sk, 1);
    const HybridState bad = HybridState::product({Bytes{1}, Bytes{0}}, StateVector());
    CHECK_THROWS_AS(fresh.query(bad), DimensionError);
}

}  // TEST_SUITE
