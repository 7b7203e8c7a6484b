#include "unclone/purify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace unclone {

namespace {

std::size_t label_bytes(int bits) { return (static_cast<std::size_t>(bits) + 7) / 8; }

double factorial(int t) {
    double f = 1.0;
    for (int i = 2; i <= t; ++i) f *= i;
    return f;
}

double binomial(double n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

void check_label_qubits(int n) {
    if (n < 1 || n > kPurifyMaxLabelQubits) throw DimensionError("purify: label qubits out of range");
}

// Calls fn(subset) for every increasing t-subset of [0, d).
template <typename F>
void for_each_subset(std::uint64_t d, int t, F&& fn) {
    std::vector<std::uint64_t> idx(t);
    std::iota(idx.begin(), idx.end(), 0);
    if (static_cast<std::uint64_t>(t) > d) return;
    while (true) {
        fn(std::span<const std::uint64_t>(idx));
        int i = t - 1;
        while (i >= 0 && idx[i] == d - t + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

StateVector GenStateSpec::run(ByteView randomness) const {
    if (!generator) throw std::invalid_argument("GenStateSpec: no generator");
    StateVector s = generator(z, randomness);
    if (s.num_qubits() != payload_qubits) throw DimensionError("GenStateSpec: generator returned wrong qubit count");
    return s;
}

HybridState purified_state(const GenStateSpec& spec, std::span<const Complex> amplitudes,
                           const std::function<Bytes(std::uint64_t)>& randomness) {
    if (spec.payload_qubits > kPurifyMaxPayloadQubits) throw DimensionError("purify: payload too large");
    const std::size_t dim = amplitudes.size();
    const int n = std::countr_zero(dim);
    if (dim == 0 || (std::size_t{1} << n) != dim) throw DimensionError("purify: amplitude count is not a power of two");
    check_label_qubits(n);
    std::vector<HybridState::Term> terms;
    terms.reserve(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
        if (std::abs(amplitudes[x]) == 0.0) continue;
        terms.push_back({{encode_label_value(x, label_bytes(n))}, amplitudes[x], spec.run(randomness(x))});
    }
    return HybridState(spec.payload_qubits, std::move(terms));
}

HybridState purified_state(const GenStateSpec& spec, const PrsKey& prs, const PprfKey& prf) {
    if (prf.input_bits() != prs.num_qubits()) throw std::invalid_argument("purify: PRF input bits must match PRS qubits");
    if (prf.output_bits() != spec.randomness_bits) throw std::invalid_argument("purify: PRF output must match r");
    check_label_qubits(prs.num_qubits());
    const auto amps = prs_amplitudes(prs);
    return purified_state(spec, amps, [&](std::uint64_t x) { return prf.eval(x); });
}

std::vector<std::uint64_t> sample_distinct(int bits, int t, Rng& rng) {
    if (bits < 1 || bits > 63) throw std::invalid_argument("sample_distinct: bits out of range");
    const std::uint64_t d = std::uint64_t{1} << bits;
    if (t < 0 || static_cast<std::uint64_t>(t) > d) throw std::invalid_argument("sample_distinct: more samples than strings");
    std::vector<std::uint64_t> out;
    std::set<std::uint64_t> seen;
    while (out.size() < static_cast<std::size_t>(t)) {
        const std::uint64_t x = rng.below(d);
        if (seen.insert(x).second) out.push_back(x);
    }
    return out;
}

HybridState symmetrise_pairs(std::span<const std::uint64_t> xs, int label_bits, std::span<const StateVector> payloads) {
    const int t = static_cast<int>(xs.size());
    if (t < 1 || t > kMaxSymmetrisedCopies) throw DimensionError("symmetrise: copy count out of range");
    if (payloads.size() != xs.size()) throw std::invalid_argument("symmetrise: need one payload per label");
    if (std::set<std::uint64_t>(xs.begin(), xs.end()).size() != xs.size()) {
        throw std::invalid_argument("symmetrise: labels must be distinct");
    }
    const int q = payloads.front().num_qubits();
    for (const auto& p : payloads) {
        if (p.num_qubits() != q) throw DimensionError("symmetrise: payloads differ in size");
    }
    check_qubits(q * t);
    const Complex amp(1.0 / std::sqrt(factorial(t)));
    std::vector<int> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<HybridState::Term> terms;
    do {
        Label label;
        std::vector<StateVector> factors;
        for (int i : perm) {
            label.push_back(encode_label_value(xs[i], label_bytes(label_bits)));
            factors.push_back(payloads[i]);
        }
        terms.push_back({std::move(label), amp, tensor(factors)});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return HybridState(q * t, std::move(terms));
}

HybridState simulate_copies(std::span<const StateVector> samples, int label_bits, Rng& rng) {
    const int t = static_cast<int>(samples.size());
    if (t < 1 || t > kMaxSymmetrisedCopies) throw DimensionError("simulate_copies: copy count out of range");
    const auto xs = sample_distinct(label_bits, t, rng);
    return symmetrise_pairs(xs, label_bits, samples);
}

CompilerEquivalenceReport compiler_equivalence_check(const GenStateSpec& spec, int n, int t, Rng& rng) {
    check_label_qubits(n);
    if (t < 1 || t > kMaxSymmetrisedCopies) throw DimensionError("compiler check: copy count out of range");
    check_qubits(n * t);
    const std::uint64_t d = std::uint64_t{1} << n;
    const std::size_t rbytes = label_bytes(spec.randomness_bits);
    std::vector<Bytes> table(d);
    for (auto& r : table) r = rng.bytes(rbytes);
    const auto xs = sample_distinct(n, t, rng);

    // Type-state route: coherent GenState(z; H(x)) on each register of |type(xs)>.
    const StateVector ts = type_state(xs, n);
    std::vector<int> widths(t, n);
    RegisterLayout layout(widths);
    std::vector<HybridState::Term> direct;
    for (Eigen::Index i = 0; i < ts.dim(); ++i) {
        if (ts[i] == Complex(0.0)) continue;
        Label label;
        std::vector<StateVector> factors;
        for (int r = 0; r < t; ++r) {
            const std::uint64_t x = layout.value(static_cast<std::uint64_t>(i), r);
            label.push_back(encode_label_value(x, label_bytes(n)));
            factors.push_back(spec.run(table[x]));
        }
        direct.push_back({std::move(label), ts[i], tensor(factors)});
    }
    HybridState type_route(spec.payload_qubits * t, std::move(direct));

    // Simulator route: independent samples GenState(z; H(x_j)), then symmetrised.
    std::vector<StateVector> samples;
    for (auto x : xs) samples.push_back(spec.run(table[x]));
    HybridState sim_route = symmetrise_pairs(xs, n, samples);

    return {n, t, xs, distance(type_route, sim_route)};
}

namespace {

// Occupation basis of the symmetric subspace: one entry per sorted t-tuple.
struct SymmetricBasis {
    int n;
    int t;
    std::vector<std::vector<std::uint64_t>> tuples;
    std::unordered_map<std::uint64_t, std::size_t> index;  // packed sorted tuple -> position

    std::uint64_t pack(std::span<const std::uint64_t> sorted) const {
        std::uint64_t key = 0;
        for (auto v : sorted) key = (key << n) | v;
        return key;
    }

    // 1 / ||sum of arrangements||, i.e. the amplitude of each arrangement in the basis vector.
    double arrangement_amplitude(std::size_t m) const {
        const auto& tup = tuples[m];
        double arrangements = factorial(t);
        std::size_t run = 1;
        for (std::size_t i = 1; i <= tup.size(); ++i) {
            if (i < tup.size() && tup[i] == tup[i - 1]) {
                ++run;
            } else {
                arrangements /= factorial(static_cast<int>(run));
                run = 1;
            }
        }
        return 1.0 / std::sqrt(arrangements);
    }
};

constexpr std::size_t kMaxSymmetricDim = 4096;

SymmetricBasis symmetric_basis(int n, int t) {
    SymmetricBasis b{n, t, {}, {}};
    const std::uint64_t d = std::uint64_t{1} << n;
    if (binomial(static_cast<double>(d + t - 1), t) > static_cast<double>(kMaxSymmetricDim)) {
        throw DimensionError("type_vs_haar: symmetric subspace too large");
    }
    std::vector<std::uint64_t> cur(t, 0);
    while (true) {
        b.index.emplace(b.pack(cur), b.tuples.size());
        b.tuples.push_back(cur);
        int i = t - 1;
        while (i >= 0 && cur[i] == d - 1) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < t; ++j) cur[j] = cur[i];
    }
    return b;
}

Eigen::MatrixXd permutation_operator(const RegisterLayout& layout, std::span<const int> perm) {
    const Eigen::Index dim = Eigen::Index{1} << layout.total_qubits();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<std::uint64_t> vals(perm.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (std::size_t r = 0; r < perm.size(); ++r) vals[r] = layout.value(static_cast<std::uint64_t>(i), perm[r]);
        p(static_cast<Eigen::Index>(layout.compose(vals)), i) = 1.0;
    }
    return p;
}

// Uniform average of |type(S)><type(S)| over t-subsets S, as a dense 2^{nt} operator.
Eigen::MatrixXd dense_type_average(int n, int t) {
    const Eigen::Index dim = Eigen::Index{1} << (n * t);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
    double count = 0.0;
    for_each_subset(std::uint64_t{1} << n, t, [&](std::span<const std::uint64_t> s) {
        const Eigen::VectorXd v = type_state(s, n).amplitudes().real();
        rho.noalias() += v * v.transpose();
        count += 1.0;
    });
    return rho / count;
}

}  // namespace

TypeHaarReport type_vs_haar_distance(int n, int t, int haar_samples, Rng& rng) {
    check_label_qubits(n);
    if (t < 1 || t > kMaxSymmetrisedCopies) throw DimensionError("type_vs_haar: t out of range");
    check_qubits(n * t);
    const SymmetricBasis basis = symmetric_basis(n, t);
    const auto dsym = static_cast<Eigen::Index>(basis.tuples.size());
    RegisterLayout layout(std::vector<int>(t, n));

    Eigen::MatrixXd rho_type = Eigen::MatrixXd::Zero(dsym, dsym);
    double subsets = 0.0;
    std::vector<std::uint64_t> tuple(t);
    std::unordered_map<std::size_t, double> coords;
    for_each_subset(std::uint64_t{1} << n, t, [&](std::span<const std::uint64_t> s) {
        const StateVector ts = type_state(s, n);
        coords.clear();
        for (Eigen::Index i = 0; i < ts.dim(); ++i) {
            const double a = ts[i].real();
            if (a == 0.0) continue;
            for (int r = 0; r < t; ++r) tuple[r] = layout.value(static_cast<std::uint64_t>(i), r);
            std::sort(tuple.begin(), tuple.end());
            const std::size_t m = basis.index.at(basis.pack(tuple));
            coords[m] += a * basis.arrangement_amplitude(m);
        }
        for (const auto& [i, ci] : coords) {
            for (const auto& [j, cj] : coords) rho_type(i, j) += ci * cj;
        }
        subsets += 1.0;
    });
    rho_type /= subsets;
    // The Haar t-copy average is the normalised symmetric projector: identity / dim in this basis.
    const Eigen::MatrixXd rho_haar = Eigen::MatrixXd::Identity(dsym, dsym) / static_cast<double>(dsym);

    const Eigen::MatrixXd diff = rho_type - rho_haar;
    const double off = (diff - Eigen::MatrixXd(diff.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    const double td = off == 0.0 ? 0.5 * diff.diagonal().cwiseAbs().sum() : trace_distance(rho_type, rho_haar);

    TypeHaarReport rep{n, t, td, 4.0 * t * t / std::ldexp(1.0, n), std::nullopt, haar_samples, rng.seed()};
    if (haar_samples > 0 && n * t <= kMaxDensityQubits) {
        const Eigen::Index dim = Eigen::Index{1} << (n * t);
        Matrix haar = Matrix::Zero(dim, dim);
        for (int s = 0; s < haar_samples; ++s) {
            Rng sub = rng.split(static_cast<std::uint64_t>(s));
            const StateVector psi = haar_sample(n, sub);
            std::vector<StateVector> copies(t, psi);
            const StateVector v = tensor(copies);
            haar.noalias() += v.amplitudes() * v.amplitudes().adjoint();
        }
        haar /= static_cast<double>(haar_samples);
        const Matrix dense_type = dense_type_average(n, t).cast<Complex>();
        rep.td_monte_carlo = trace_distance(dense_type, haar);
    }
    return rep;
}

double type_vs_haar_distance_dense(int n, int t) {
    check_label_qubits(n);
    check_qubits(n * t, kMaxDensityQubits);
    const Eigen::Index dim = Eigen::Index{1} << (n * t);
    RegisterLayout layout(std::vector<int>(t, n));
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<int> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        sym += permutation_operator(layout, perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    sym /= factorial(t);
    const double dsym = sym.trace();
    return trace_distance(dense_type_average(n, t), sym / dsym);
}

SmallRangeParams SmallRangeParams::derived(int k, double p, int domain_bits, double c_osrd) {
    SmallRangeParams s;
    s.k = k;
    s.p = p;
    s.domain_bits = domain_bits;
    s.c_osrd = c_osrd;
    s.ell = static_cast<int>(std::ceil(c_osrd * p * p * k * k * k));
    return s;
}

void SmallRangeParams::validate() const {
    if (k < 1 || k > 3) throw DimensionError("small range: k must lie in [1, 3]");
    if (ell < 1 || ell > 64) throw DimensionError("small range: ell must lie in [1, 64]");
    if (domain_bits < 1 || domain_bits > 8) throw DimensionError("small range: domain must be at most 2^8");
}

namespace {

constexpr std::size_t kMaxSmallRangeBranches = std::size_t{1} << 16;

void check_small_range_inputs(const SmallRangeParams& params, std::span<const std::vector<Complex>> queries,
                              std::span<const int> p_map) {
    params.validate();
    const std::size_t domain = std::size_t{1} << params.domain_bits;
    if (queries.size() != static_cast<std::size_t>(params.k)) throw std::invalid_argument("small range: need k queries");
    for (const auto& q : queries) {
        if (q.size() != domain) throw DimensionError("small range: query length must equal the domain size");
        double norm = 0.0;
        for (auto a : q) norm += std::norm(a);
        if (std::abs(norm - 1.0) > kNormTolerance) throw std::invalid_argument("small range: query not normalised");
    }
    if (p_map.size() != domain) throw DimensionError("small range: P must cover the domain");
    for (int v : p_map) {
        if (v < 0 || v >= params.ell) throw std::out_of_range("small range: P value outside [ell]");
    }
}

}  // namespace

double small_range_overlap(int ell, std::span<const std::vector<Complex>> queries, std::span<const int> p_map) {
    const int k = static_cast<int>(queries.size());
    std::vector<std::vector<double>> w(k, std::vector<double>(ell, 0.0));
    for (int i = 0; i < k; ++i) {
        for (std::size_t x = 0; x < queries[i].size(); ++x) w[i][p_map[x]] += std::norm(queries[i][x]);
    }
    std::vector<bool> used(ell, false);
    std::function<double(int)> rec = [&](int i) -> double {
        if (i == k) return 1.0;
        double acc = 0.0;
        for (int j = 0; j < ell; ++j) {
            if (used[j] || w[i][j] == 0.0) continue;
            used[j] = true;
            acc += w[i][j] * rec(i + 1);
            used[j] = false;
        }
        return acc;
    };
    return rec(0);
}

SmallRangeResult small_range_states(const SmallRangeParams& params, std::span<const std::vector<Complex>> queries,
                                    std::span<const StateVector> samples, std::span<const int> p_map) {
    check_small_range_inputs(params, queries, p_map);
    if (samples.size() != static_cast<std::size_t>(params.ell)) throw std::invalid_argument("small range: need ell samples");
    const int q = samples.front().num_qubits();
    if (q > 3) throw DimensionError("small range: payloads are limited to 3 qubits");
    for (const auto& s : samples) {
        if (s.num_qubits() != q) throw DimensionError("small range: samples differ in size");
    }
    const int k = params.k;
    std::vector<std::vector<std::uint64_t>> support(k);
    std::size_t branches = 1;
    for (int i = 0; i < k; ++i) {
        for (std::size_t x = 0; x < queries[i].size(); ++x) {
            if (std::abs(queries[i][x]) != 0.0) support[i].push_back(x);
        }
        branches *= support[i].size();
    }
    if (branches > kMaxSmallRangeBranches) throw DimensionError("small range: too many branches");

    std::vector<HybridState::Term> all;
    std::vector<HybridState::Term> distinct;
    double distinct_weight = 0.0;
    std::vector<std::size_t> pos(k, 0);
    std::vector<StateVector> factors(k);
    while (true) {
        Label label;
        Complex amp(1.0);
        std::set<int> buckets;
        for (int i = 0; i < k; ++i) {
            const std::uint64_t x = support[i][pos[i]];
            label.push_back(encode_label_value(x, 1));
            amp *= queries[i][x];
            buckets.insert(p_map[x]);
            factors[i] = samples[p_map[x]];
        }
        StateVector payload = tensor(factors);
        if (buckets.size() == static_cast<std::size_t>(k)) {
            distinct.push_back({label, amp, payload});
            distinct_weight += std::norm(amp);
        }
        all.push_back({std::move(label), amp, std::move(payload)});
        int i = k - 1;
        while (i >= 0 && ++pos[i] == support[i].size()) pos[i--] = 0;
        if (i < 0) break;
    }
    HybridState phi(q * k, std::move(all));
    std::optional<HybridState> phi0;
    double overlap = 0.0;
    if (!distinct.empty() && distinct_weight > kMinOutcomeProbability) {
        phi0.emplace(q * k, std::move(distinct), HybridState::Normalization::kRenormalize);
        overlap = std::norm(inner(phi, *phi0));
    }
    return {std::move(phi), std::move(phi0), overlap, distinct_weight};
}

SmallRangeStats small_range_experiment(const SmallRangeParams& params, int payload_qubits, int trials,
                                       bool build_states, Rng& rng) {
    params.validate();
    if (trials < 2) throw std::invalid_argument("small range: need at least two trials");
    const std::size_t domain = std::size_t{1} << params.domain_bits;
    const std::vector<Complex> uniform(domain, Complex(1.0 / std::sqrt(static_cast<double>(domain))));
    const std::vector<std::vector<Complex>> queries(params.k, uniform);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<int> p_map(domain);
    for (int trial = 0; trial < trials; ++trial) {
        Rng sub = rng.split(static_cast<std::uint64_t>(trial));
        for (auto& v : p_map) v = static_cast<int>(sub.below(static_cast<std::uint64_t>(params.ell)));
        double overlap;
        if (build_states) {
            std::vector<StateVector> samples;
            for (int j = 0; j < params.ell; ++j) samples.push_back(haar_sample(payload_qubits, sub));
            overlap = small_range_states(params, queries, samples, p_map).overlap;
        } else {
            overlap = small_range_overlap(params.ell, queries, p_map);
        }
        sum += overlap;
        sum_sq += overlap * overlap;
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1));
    return {params.k,
            params.ell,
            trials,
            mean,
            std::sqrt(var / trials),
            1.0 - static_cast<double>(params.k * params.k) / params.ell,
            rng.seed()};
}

SrdReport classical_srd_experiment(int k, std::uint64_t ell, std::uint64_t domain, int trials, Rng& rng, double c_srd) {
    if (k < 1 || ell < 1 || domain < static_cast<std::uint64_t>(k) || trials < 1) {
        throw std::invalid_argument("srd: need k >= 1, ell >= 1, domain >= k, trials >= 1");
    }
    auto distinct_queries = [&](Rng& r) {
        std::set<std::uint64_t> xs;
        while (xs.size() < static_cast<std::size_t>(k)) xs.insert(r.below(domain));
        return xs;
    };
    int coll_full = 0;
    int coll_small = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng sub = rng.split(static_cast<std::uint64_t>(trial));
        {
            Rng world = sub.split(0);
            std::set<std::uint64_t> outputs;
            for (auto x : distinct_queries(world)) {
                (void)x;
                outputs.insert(world.next_u64());  // fresh table entry per distinct query
            }
            coll_full += outputs.size() < static_cast<std::size_t>(k);
        }
        {
            Rng world = sub.split(1);
            std::unordered_map<std::uint64_t, std::uint64_t> samples;  // lazily drawn y_1..y_ell
            std::set<std::uint64_t> outputs;
            for (auto x : distinct_queries(world)) {
                (void)x;
                const std::uint64_t bucket = world.below(ell);  // P(x), fresh per distinct x
                auto it = samples.find(bucket);
                if (it == samples.end()) it = samples.emplace(bucket, world.next_u64()).first;
                outputs.insert(it->second);
            }
            coll_small += outputs.size() < static_cast<std::size_t>(k);
        }
    }
    const double pf = static_cast<double>(coll_full) / trials;
    const double ps = static_cast<double>(coll_small) / trials;
    const double se = std::sqrt((pf * (1 - pf) + ps * (1 - ps)) / trials);
    return {k,    ell, domain, trials, pf, ps, ps - pf, se, c_srd * k * k * k / static_cast<double>(ell),
            rng.seed()};
}

}  // namespace unclone
