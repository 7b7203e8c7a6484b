#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "../oracles.hpp"
#include "unclone/purify.hpp"

using namespace unclone;

namespace {

GenStateSpec haar_generator(int payload_qubits) {
    GenStateSpec spec;
    spec.z = {0x5A};
    spec.randomness_bits = 64;
    spec.payload_qubits = payload_qubits;
    spec.generator = [payload_qubits](ByteView z, ByteView r) {
        Rng local(decode_label_value(r) ^ z[0]);
        return haar_sample(payload_qubits, local);
    };
    return spec;
}

std::vector<Complex> uniform_query(std::size_t domain) {
    return std::vector<Complex>(domain, Complex(1.0 / std::sqrt(double(domain))));
}

// ||zeta_empty||^2 by enumerating tuples with pairwise distinct buckets.
double brute_distinct_weight(const std::vector<std::vector<Complex>>& qs, const std::vector<int>& p) {
    const std::size_t d = p.size();
    double total = 0;
    if (qs.size() == 2) {
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                if (p[a] != p[b]) total += std::norm(qs[0][a] * qs[1][b]);
    } else {
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t c = 0; c < d; ++c)
                    if (p[a] != p[b] && p[a] != p[c] && p[b] != p[c]) total += std::norm(qs[0][a] * qs[1][b] * qs[2][c]);
    }
    return total;
}

}  // namespace

TEST_SUITE("purify") {

TEST_CASE("type-vs-Haar distance matches the closed form") {
    Rng rng(41);
    for (auto [n, t] : {std::pair{2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3}, {6, 2}}) {
        const auto r = type_vs_haar_distance(n, t, 0, rng);
        CHECK(r.td_exact == doctest::Approx(oracle::type_haar_td(n, t)).epsilon(1e-10));
        CHECK(r.td_exact <= r.bound);
    }
}

TEST_CASE("dense and symmetric routes agree") {
    for (auto [n, t] : {std::pair{2, 2}, {3, 2}, {2, 3}, {3, 3}, {5, 2}}) {
        Rng rng(42);
        const double sym = type_vs_haar_distance(n, t, 0, rng).td_exact;
        CHECK(type_vs_haar_distance_dense(n, t) == doctest::Approx(sym).epsilon(1e-9));
    }
    CHECK_THROWS(type_vs_haar_distance_dense(6, 2));
}

TEST_CASE("sample_distinct draws distinct in-range values") {
    Rng rng(43);
    for (int i = 0; i < 50; ++i) {
        const auto xs = sample_distinct(3, 8, rng);
        CHECK(std::set<std::uint64_t>(xs.begin(), xs.end()).size() == 8);
        for (auto x : xs) CHECK(x < 8);
    }
    CHECK_THROWS(sample_distinct(3, 9, rng));
}

TEST_CASE("symmetrisation ties payloads to labels") {
    Rng rng(44);
    const std::vector<std::uint64_t> xs = {1, 4, 6};
    std::vector<StateVector> ps = {haar_sample(1, rng), haar_sample(1, rng), haar_sample(1, rng)};
    const auto s = symmetrise_pairs(xs, 3, ps);
    CHECK(s.squared_norm() == doctest::Approx(1.0));
    CHECK(s.size() == 6);

    // Reordering pairs jointly leaves the state unchanged.
    const std::vector<std::uint64_t> xs2 = {6, 1, 4};
    std::vector<StateVector> ps2 = {ps[2], ps[0], ps[1]};
    CHECK(distance(s, symmetrise_pairs(xs2, 3, ps2)) < 1e-12);

    // Negative control: moving payloads without their labels is detected.
    std::vector<StateVector> shuffled = {ps[1], ps[0], ps[2]};
    CHECK(distance(s, symmetrise_pairs(xs, 3, shuffled)) > 1e-3);

    const std::vector<std::uint64_t> dup = {1, 1, 6};
    CHECK_THROWS(symmetrise_pairs(dup, 3, ps));
    CHECK_THROWS(symmetrise_pairs(xs, 3, std::span(ps).first(2)));
}

TEST_CASE("compiler routes coincide") {
    Rng rng(45);
    const auto spec = haar_generator(1);
    for (auto [n, t] : {std::pair{3, 2}, {4, 3}, {5, 2}}) {
        const auto r = compiler_equivalence_check(spec, n, t, rng);
        CHECK(r.xs.size() == std::size_t(t));
        CHECK(r.exact_gap < 1e-9);
    }
}

TEST_CASE("purified state carries PRS amplitudes and PRF randomness") {
    Rng rng(46);
    const auto spec = haar_generator(2);
    const PrsKey prs = prs_setup(4, rng);
    const PprfKey prf = PprfKey::generate(4, 64, rng);
    const auto st = purified_state(spec, prs, prf);
    CHECK(st.size() == 16);
    const auto amps = prs_amplitudes(prs);
    for (std::uint64_t x = 0; x < 16; ++x) {
        const Branch* b = st.find({encode_label_value(x, 1)});
        REQUIRE(b);
        const StateVector expect = spec.run(prf.eval(x));
        CHECK(std::abs(inner(b->payload, expect) * b->amplitude - amps[x]) < 1e-12);
    }
    CHECK_THROWS(purified_state(spec, prs, PprfKey::generate(5, 64, rng)));
    CHECK_THROWS(purified_state(spec, prs, PprfKey::generate(4, 32, rng)));
}

TEST_CASE("derived small-range size") {
    CHECK(SmallRangeParams::derived(2, 1.0, 6).ell == 128);
    CHECK(SmallRangeParams::derived(3, 0.5, 6).ell == 108);
    CHECK(SmallRangeParams::derived(1, 0.3, 6, 10.0).ell == 1);
    CHECK_THROWS(SmallRangeParams::derived(2, 1.0, 6).validate());
}

TEST_CASE("distinct-bucket weight agrees across three computations") {
    Rng rng(47);
    for (int k : {2, 3}) {
        SmallRangeParams params;
        params.k = k;
        params.ell = 5;
        params.domain_bits = 3;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<int> p(8);
            for (auto& v : p) v = static_cast<int>(rng.below(params.ell));
            std::vector<std::vector<Complex>> qs;
            for (int i = 0; i < k; ++i) {
                const auto h = haar_sample(3, rng);
                qs.emplace_back(h.amplitudes().data(), h.amplitudes().data() + 8);
            }
            std::vector<StateVector> samples;
            for (int j = 0; j < params.ell; ++j) samples.push_back(haar_sample(1, rng));
            const double fast = small_range_overlap(params.ell, qs, p);
            CHECK(fast == doctest::Approx(brute_distinct_weight(qs, p)).epsilon(1e-12));
            const auto res = small_range_states(params, qs, samples, p);
            CHECK(res.distinct_weight == doctest::Approx(fast).epsilon(1e-12));
            if (res.phi0) CHECK(res.overlap == doctest::Approx(fast).epsilon(1e-9));
        }
    }
}

TEST_CASE("uniform queries give the closed-form mean for one bucket map") {
    // With P a bijection onto ell = domain buckets, only x1 = x2 collides.
    const std::size_t d = 16;
    std::vector<int> p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = static_cast<int>(i);
    const std::vector<std::vector<Complex>> qs = {uniform_query(d), uniform_query(d)};
    CHECK(small_range_overlap(16, qs, p) == doctest::Approx(1.0 - 1.0 / 16));
}

TEST_CASE("small-range Monte Carlo sits on the analytic mean") {
    Rng rng(48);
    SmallRangeParams params;
    params.k = 2;
    params.ell = 16;
    params.domain_bits = 4;
    const auto s = small_range_experiment(params, 1, 400, false, rng);
    const double expect = oracle::small_range_mean_k2(16, 16);
    CHECK(std::abs(s.mean_overlap - expect) < 5 * s.stderr_overlap + 1e-12);
    CHECK(s.bound == doctest::Approx(1.0 - 4.0 / 16));
}

TEST_CASE("classical small-range distinguisher") {
    Rng rng(49);
    const auto r = classical_srd_experiment(4, 16, 1u << 20, 4000, rng);
    // Buckets collide like a birthday draw; the full 64-bit table never does.
    const double p_small = 1.0 - (15.0 * 14.0 * 13.0) / (16.0 * 16.0 * 16.0);
    CHECK(r.collision_full == 0.0);
    CHECK(std::abs(r.collision_small - p_small) < 5 * std::sqrt(p_small * (1 - p_small) / 4000));
}

}  // TEST_SUITE
