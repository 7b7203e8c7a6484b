#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <bit>
#include <map>

#include "unclone/minischeme.hpp"
#include "unclone/prs.hpp"

using namespace unclone;

TEST_SUITE("prs") {

TEST_CASE("amplitudes are signed by the PRF bit") {
    Rng rng(31);
    const PrsKey key = prs_setup(5, rng);
    const auto amps = prs_amplitudes(key);
    const StateVector s = prs_state(key);
    REQUIRE(amps.size() == 32);
    const double mag = std::ldexp(1.0, -5 / 2) / (5 % 2 ? std::sqrt(2.0) : 1.0);
    for (std::uint64_t x = 0; x < 32; ++x) {
        const double sign = key.k.eval_bits(x) ? -1.0 : 1.0;
        CHECK(std::abs(amps[x] - Complex(sign * mag)) < 1e-12);
        CHECK(std::abs(s[static_cast<Eigen::Index>(x)] - amps[x]) < 1e-12);
    }
}

TEST_CASE("independent keys give nearly orthogonal states") {
    Rng rng(32);
    double sum = 0;
    const int pairs = 200;
    for (int i = 0; i < pairs; ++i) sum += fidelity(prs_state(prs_setup(8, rng)), prs_state(prs_setup(8, rng)));
    // Random sign vectors: E F = 1/d.
    CHECK(sum / pairs < 3.0 / 256);
}

TEST_CASE("phase state from a k-wise function") {
    Rng rng(33);
    const auto f = KwiseFunction::generate(2, 4, 1, rng);
    const auto s = phase_state(f);
    CHECK(s.num_qubits() == 4);
    for (std::uint64_t x = 0; x < 16; ++x) {
        const double sign = f.eval(x) ? -1.0 : 1.0;
        CHECK(std::abs(s[static_cast<Eigen::Index>(x)] - Complex(sign / 4)) < 1e-12);
    }
    CHECK_THROWS(phase_state(KwiseFunction::generate(2, 4, 2, rng)));
}

}  // TEST_SUITE

TEST_SUITE("minischeme") {

TEST_CASE("subspace counts are Gaussian binomials") {
    CHECK(subspace_count(2) == 3);
    CHECK(subspace_count(4) == 35);
    CHECK(subspace_count(6) == 1395);
    CHECK(subspace_count(8) == 200787);
    CHECK_THROWS(subspace_count(3));
    CHECK_THROWS(subspace_count(kMiniMaxBits + 2));
}

TEST_CASE("subspace and dual are orthogonal complements") {
    for (int seed = 0; seed < 20; ++seed) {
        const Bytes r = {static_cast<std::uint8_t>(seed)};
        const Subspace a = sample_subspace(6, r);
        CHECK(a.dim() == 3);
        const auto el = a.elements();
        const auto dual = a.dual_elements();
        CHECK(el.size() == 8);
        CHECK(dual.size() == 8);
        for (auto x : el) {
            CHECK(a.contains(x));
            for (auto y : dual) CHECK(std::popcount(x & y) % 2 == 0);
        }
        for (std::uint32_t y = 0; y < 64; ++y) CHECK(a.dual_contains(y) == (std::find(dual.begin(), dual.end(), y) != dual.end()));
    }
}

TEST_CASE("sampler hits every 2-dimensional subspace of GF(2)^4 evenly") {
    std::map<Bytes, int> counts;
    const int draws = 35 * 200;
    for (int i = 0; i < draws; ++i) {
        const Bytes r = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8)};
        ++counts[sample_subspace(4, r).serialize()];
    }
    CHECK(counts.size() == 35);
    double chi2 = 0;
    for (const auto& [k, c] : counts) chi2 += (c - 200.0) * (c - 200.0) / 200.0;
    // 34 degrees of freedom; the 0.999 quantile is about 65.
    CHECK(chi2 < 65.0);
}

TEST_CASE("serial number round trip and rejection of malformed input") {
    const Subspace a = sample_subspace(8, Bytes{7});
    const auto back = Subspace::parse(a.serialize());
    REQUIRE(back);
    CHECK(*back == a);
    Bytes bad = a.serialize();
    bad.pop_back();
    CHECK(!Subspace::parse(bad));
    CHECK(!Subspace::parse(Bytes{}));
    CHECK_THROWS(Subspace(4, {0b0011, 0b0101}));
}

TEST_CASE("honest notes pass with certainty") {
    Rng rng(34);
    for (int n : {2, 4, 6, 8}) {
        const auto note = mini_gen(n, Bytes{static_cast<std::uint8_t>(n)});
        const auto a = Subspace::parse(note.sn);
        REQUIRE(a);
        CHECK(mini_accept_probability(*a, note.note) == doctest::Approx(1.0));
        const auto out = mini_verify(note.sn, note.note, rng);
        CHECK(out.bit);
        CHECK((out.post.amplitudes() - note.note.amplitudes()).norm() < 1e-12);
    }
}

TEST_CASE("the verify operator equals the subspace projector") {
    const Subspace a = sample_subspace(4, Bytes{9});
    const StateVector s = subspace_state(a);
    const Matrix proj = s.amplitudes() * s.amplitudes().adjoint();
    CHECK((mini_verify_operator(a) - proj).norm() < 1e-12);
    Rng rng(35);
    const auto psi = haar_sample(4, rng);
    CHECK(mini_accept_branch(a, psi.amplitudes()).squaredNorm() ==
          doctest::Approx(mini_accept_probability(a, psi)));
    CHECK(mini_accept_probability(a, psi) == doctest::Approx(fidelity(s, psi)));
}

TEST_CASE("malformed serial numbers reject") {
    Rng rng(36);
    const auto note = mini_gen(4, Bytes{1});
    CHECK(!mini_verify(Bytes{0xFF}, note.note, rng).bit);
    const auto other = mini_gen(6, Bytes{1});
    CHECK(!mini_verify(other.sn, note.note, rng).bit);
}

TEST_CASE("simple counterfeits") {
    Rng rng(37);
    const int n = 4;
    const auto note = mini_gen(n, Bytes{3});
    const auto a = *Subspace::parse(note.sn);
    const auto [z1, z2] = mini_counterfeit(MiniAttack::kZeroPad, note.note, rng);
    CHECK(mini_accept_probability(a, z1) == doctest::Approx(1.0));
    CHECK(mini_accept_probability(a, z2) == doctest::Approx(0.25));  // 1 / |A|
    for (int i = 0; i < 20; ++i) {
        const auto [m1, m2] = mini_counterfeit(MiniAttack::kMeasureClone, note.note, rng);
        CHECK(mini_accept_probability(a, m1) == doctest::Approx(0.25));
        const auto [h1, h2] = mini_counterfeit(MiniAttack::kHadamardClone, note.note, rng);
        CHECK(mini_accept_probability(a, h1) == doctest::Approx(0.25));
        CHECK((h1.amplitudes() - h2.amplitudes()).norm() == 0.0);
    }
    CHECK(parse_mini_attack(to_string(MiniAttack::kHadamardClone)) == MiniAttack::kHadamardClone);
    CHECK_THROWS(parse_mini_attack("nope"));
}

}  // TEST_SUITE
