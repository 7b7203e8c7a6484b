#include "unclone/minischeme.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <cmath>

#include "unclone/hash.hpp"
#include "unclone/hybrid.hpp"

namespace unclone {

namespace {

int pivot_of(std::uint32_t row) { return std::bit_width(row) - 1; }

bool parity(std::uint32_t x) { return std::popcount(x) & 1; }

void check_n(int n) {
    if (n < 2 || n > kMiniMaxBits || n % 2 != 0) throw std::invalid_argument("minischeme: n must be even in [2, 12]");
}

// Free entries of an echelon matrix with the given pivot bit positions
// (descending): each row has a free slot at every lower non-pivot position.
int free_entries(int n, std::uint32_t pivot_mask) {
    int total = 0;
    for (int p = 0; p < n; ++p) {
        if (!((pivot_mask >> p) & 1u)) continue;
        total += p - std::popcount(pivot_mask & ((1u << p) - 1));
    }
    return total;
}

std::vector<std::uint32_t> span_of(const std::vector<std::uint32_t>& gens) {
    std::vector<std::uint32_t> out{0};
    for (auto g : gens) {
        const std::size_t size = out.size();
        for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] ^ g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Subspace::Subspace(int n, std::vector<std::uint32_t> rows) : n_(n), rows_(std::move(rows)) {
    check_n(n);
    if (rows_.size() != static_cast<std::size_t>(n / 2)) throw std::invalid_argument("subspace: dimension must be n/2");
    std::uint32_t pivots = 0;
    int last = n;
    for (auto r : rows_) {
        if (r == 0 || (r >> n) != 0) throw std::invalid_argument("subspace: row out of range");
        const int p = pivot_of(r);
        if (p >= last) throw std::invalid_argument("subspace: rows not in echelon order");
        last = p;
        pivots |= 1u << p;
    }
    for (auto r : rows_) {
        if ((r & pivots) != (1u << pivot_of(r))) throw std::invalid_argument("subspace: rows not reduced");
    }
    for (int f = n - 1; f >= 0; --f) {
        if ((pivots >> f) & 1u) continue;
        std::uint32_t d = 1u << f;
        for (auto r : rows_) {
            if ((r >> f) & 1u) d |= 1u << pivot_of(r);
        }
        dual_.push_back(d);
    }
}

bool Subspace::contains(std::uint32_t x) const {
    if (x >> n_) return false;
    for (auto d : dual_) {
        if (parity(x & d)) return false;
    }
    return true;
}

bool Subspace::dual_contains(std::uint32_t y) const {
    if (y >> n_) return false;
    for (auto r : rows_) {
        if (parity(y & r)) return false;
    }
    return true;
}

std::vector<std::uint32_t> Subspace::elements() const { return span_of(rows_); }
std::vector<std::uint32_t> Subspace::dual_elements() const { return span_of(dual_); }

Bytes Subspace::serialize() const {
    Bytes out;
    put_u8(out, static_cast<std::uint8_t>(n_));
    const std::size_t width = (static_cast<std::size_t>(n_) + 7) / 8;
    for (auto r : rows_) {
        const Bytes b = encode_label_value(r, width);
        put_bytes(out, b);
    }
    return out;
}

std::optional<Subspace> Subspace::parse(ByteView sn) {
    if (sn.empty()) return std::nullopt;
    const int n = sn[0];
    if (n < 2 || n > kMiniMaxBits || n % 2 != 0) return std::nullopt;
    const std::size_t width = (static_cast<std::size_t>(n) + 7) / 8;
    if (sn.size() != 1 + width * static_cast<std::size_t>(n / 2)) return std::nullopt;
    std::vector<std::uint32_t> rows;
    for (int i = 0; i < n / 2; ++i) {
        std::uint32_t r = 0;
        for (std::size_t j = 0; j < width; ++j) r = (r << 8) | sn[1 + i * width + j];
        rows.push_back(r);
    }
    try {
        return Subspace(n, std::move(rows));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::uint64_t subspace_count(int n) {
    check_n(n);
    std::uint64_t total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) == n / 2) total += std::uint64_t{1} << free_entries(n, mask);
    }
    return total;
}

Subspace sample_subspace(int n, ByteView randomness) {
    check_n(n);
    const Digest d = sha256(randomness);
    std::uint64_t seed = 0;
    for (int i = 0; i < 8; ++i) seed = (seed << 8) | d[i];
    Rng rng(seed);
    // Pick the pivot pattern with probability proportional to the number of
    // echelon matrices sharing it, then fill its free entries uniformly.
    std::uint64_t target = rng.below(subspace_count(n));
    std::uint32_t pivots = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != n / 2) continue;
        const std::uint64_t w = std::uint64_t{1} << free_entries(n, mask);
        if (target < w) {
            pivots = mask;
            break;
        }
        target -= w;
    }
    std::vector<std::uint32_t> rows;
    for (int p = n - 1; p >= 0; --p) {
        if (!((pivots >> p) & 1u)) continue;
        std::uint32_t r = 1u << p;
        for (int f = p - 1; f >= 0; --f) {
            if (!((pivots >> f) & 1u) && (rng.next_u64() & 1u)) r |= 1u << f;
        }
        rows.push_back(r);
    }
    return Subspace(n, std::move(rows));
}

StateVector subspace_state(const Subspace& a) {
    Vector v = Vector::Zero(Eigen::Index{1} << a.n());
    const double amp = std::pow(2.0, -0.25 * a.n());
    for (auto x : a.elements()) v[x] = amp;
    return StateVector(a.n(), std::move(v));
}

MiniBanknote mini_gen(int n, ByteView randomness) {
    Subspace a = sample_subspace(n, randomness);
    return {a.serialize(), subspace_state(a)};
}

namespace {

Vector project(const Vector& v, const Subspace& a, bool dual) {
    Vector out = Vector::Zero(v.size());
    for (auto x : dual ? a.dual_elements() : a.elements()) out[x] = v[x];
    return out;
}

// Chooses between a kept branch and its complement by their squared norms.
bool sample_branch(double keep, double total, Rng& rng) {
    if (keep < kMinOutcomeProbability * total) return false;
    if (total - keep < kMinOutcomeProbability * total) return true;
    return rng.uniform() * total < keep;
}

}  // namespace

Vector mini_accept_branch(const Subspace& a, const Vector& v) {
    Vector w = project(v, a, false);
    walsh_hadamard(w);
    w = project(w, a, true);
    walsh_hadamard(w);
    return w;
}

double mini_accept_probability(const Subspace& a, const StateVector& note) {
    if (note.num_qubits() != a.n()) throw DimensionError("mini_verify: dimension mismatch");
    return mini_accept_branch(a, note.amplitudes()).squaredNorm();
}

Matrix mini_verify_operator(const Subspace& a) {
    check_qubits(a.n(), kMaxDensityQubits);
    const Eigen::Index dim = Eigen::Index{1} << a.n();
    Matrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) m.col(j) = mini_accept_branch(a, Vector::Unit(dim, j));
    return m;
}

MiniVerifyOutcome mini_verify(const Subspace& a, const StateVector& note, Rng& rng) {
    if (note.num_qubits() != a.n()) throw DimensionError("mini_verify: dimension mismatch");
    const int n = a.n();
    const double accept = mini_accept_probability(a, note);
    const Vector& v = note.amplitudes();
    Vector first = project(v, a, false);
    const double p1 = first.squaredNorm();
    if (!sample_branch(p1, 1.0, rng)) {
        return {false, StateVector::normalized(n, v - first), accept};
    }
    walsh_hadamard(first);
    Vector second = project(first, a, true);
    const double p2 = second.squaredNorm();
    if (!sample_branch(p2, p1, rng)) {
        Vector rest = first - second;
        walsh_hadamard(rest);
        return {false, StateVector::normalized(n, std::move(rest)), accept};
    }
    walsh_hadamard(second);
    return {true, StateVector::normalized(n, std::move(second)), accept};
}

MiniVerifyOutcome mini_verify(ByteView sn, const StateVector& note, Rng& rng) {
    auto a = Subspace::parse(sn);
    if (!a || a->n() != note.num_qubits()) return {false, note, 0.0};
    return mini_verify(*a, note, rng);
}

MiniAttack parse_mini_attack(std::string_view name) {
    if (name == "measure-clone") return MiniAttack::kMeasureClone;
    if (name == "zero-pad") return MiniAttack::kZeroPad;
    if (name == "hadamard-clone") return MiniAttack::kHadamardClone;
    throw std::invalid_argument("unknown mini-scheme attack: " + std::string(name));
}

std::string_view to_string(MiniAttack attack) {
    switch (attack) {
        case MiniAttack::kMeasureClone: return "measure-clone";
        case MiniAttack::kZeroPad: return "zero-pad";
        case MiniAttack::kHadamardClone: return "hadamard-clone";
    }
    return "?";
}

std::pair<StateVector, StateVector> mini_counterfeit(MiniAttack attack, const StateVector& note, Rng& rng) {
    const int n = note.num_qubits();
    RegisterLayout layout({n});
    const int regs[] = {0};
    switch (attack) {
        case MiniAttack::kMeasureClone: {
            const auto m = measure(note, layout, regs, rng);
            return {m.post, m.post};
        }
        case MiniAttack::kZeroPad:
            return {note, StateVector::basis(n, 0)};
        case MiniAttack::kHadamardClone: {
            Vector v = note.amplitudes();
            walsh_hadamard(v);
            const auto m = measure(StateVector::normalized(n, std::move(v)), layout, regs, rng);
            Vector back = m.post.amplitudes();
            walsh_hadamard(back);
            StateVector s = StateVector::normalized(n, std::move(back));
            return {s, s};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace unclone
