#include "unclone/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>
#include <set>

namespace unclone {

void check_qubits(int num_qubits, int cap) {
    if (num_qubits < 0) throw DimensionError("negative qubit count");
    if (num_qubits > cap) {
        throw DimensionError("dimension cap exceeded: " + std::to_string(num_qubits) + " qubits > " +
                             std::to_string(cap));
    }
}

StateVector::StateVector(int num_qubits, Vector amplitudes) : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_qubits(num_qubits);
    if (amplitudes_.size() != (Eigen::Index{1} << num_qubits)) {
        throw DimensionError("amplitude vector length is not 2^num_qubits");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("state vector is not normalised");
    }
}

StateVector StateVector::normalized(int num_qubits, Vector v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalise a zero vector");
    v /= n;
    return StateVector(num_qubits, std::move(v));
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    check_qubits(num_qubits);
    const auto dim = Eigen::Index{1} << num_qubits;
    if (index >= static_cast<std::uint64_t>(dim)) throw std::out_of_range("basis index out of range");
    Vector v = Vector::Zero(dim);
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(num_qubits, std::move(v));
}

StateVector StateVector::unit() {
    Vector v(1);
    v[0] = 1.0;
    return StateVector(0, std::move(v));
}

Bytes StateVector::serialize() const {
    Bytes out;
    out.reserve(4 + 16 * static_cast<std::size_t>(dim()));
    put_u32(out, static_cast<std::uint32_t>(num_qubits_));
    for (Eigen::Index i = 0; i < dim(); ++i) {
        put_f64(out, amplitudes_[i].real());
        put_f64(out, amplitudes_[i].imag());
    }
    return out;
}

StateVector StateVector::deserialize(ByteView data) {
    ByteReader r(data);
    const auto n = static_cast<int>(r.u32());
    check_qubits(n);
    Vector v(Eigen::Index{1} << n);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = r.f64();
        const double im = r.f64();
        v[i] = Complex(re, im);
    }
    r.expect_done();
    return StateVector(n, std::move(v));
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
    return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

StateVector tensor(const StateVector& a, const StateVector& b) {
    check_qubits(a.num_qubits() + b.num_qubits());
    Vector v(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) v.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
    return StateVector::normalized(a.num_qubits() + b.num_qubits(), std::move(v));
}

StateVector tensor(std::span<const StateVector> factors) {
    StateVector acc = StateVector::unit();
    for (const auto& f : factors) acc = tensor(acc, f);
    return acc;
}

RegisterLayout::RegisterLayout(std::vector<int> widths) : widths_(std::move(widths)), shifts_(widths_.size()) {
    int shift = 0;
    for (int i = static_cast<int>(widths_.size()) - 1; i >= 0; --i) {
        if (widths_[i] < 0) throw std::invalid_argument("register width must be non-negative");
        shifts_[i] = shift;
        shift += widths_[i];
    }
    total_ = shift;
    if (total_ > 64) throw DimensionError("register layout wider than 64 bits");
}

std::uint64_t RegisterLayout::value(std::uint64_t index, int reg) const {
    const int w = width(reg);
    if (w == 0) return 0;
    const std::uint64_t mask = w == 64 ? ~0ULL : ((1ULL << w) - 1);
    return (index >> shift(reg)) & mask;
}

std::uint64_t RegisterLayout::with_value(std::uint64_t index, int reg, std::uint64_t v) const {
    const int w = width(reg);
    if (w == 0) return index;
    const std::uint64_t mask = (w == 64 ? ~0ULL : ((1ULL << w) - 1)) << shift(reg);
    return (index & ~mask) | ((v << shift(reg)) & mask);
}

std::uint64_t RegisterLayout::compose(std::span<const std::uint64_t> values) const {
    if (static_cast<int>(values.size()) != num_registers()) throw std::invalid_argument("label arity mismatch");
    std::uint64_t index = 0;
    for (int r = 0; r < num_registers(); ++r) {
        if (width(r) < 64 && values[r] >> width(r)) throw std::out_of_range("label value exceeds register width");
        index |= values[r] << shift(r);
    }
    return index;
}

StateVector superpose(const RegisterLayout& layout, std::span<const BasisTerm> terms) {
    if (terms.empty()) throw std::invalid_argument("superpose: no terms");
    check_qubits(layout.total_qubits());
    Vector v = Vector::Zero(Eigen::Index{1} << layout.total_qubits());
    for (const auto& t : terms) v[static_cast<Eigen::Index>(layout.compose(t.label))] += t.amplitude;
    if (v.norm() == 0.0) throw std::invalid_argument("superpose: amplitudes cancel to zero");
    return StateVector::normalized(layout.total_qubits(), std::move(v));
}

StateVector apply_oracle(const StateVector& state, const RegisterLayout& layout, std::span<const int> input_regs,
                         int output_reg, const ClassicalFunction& f) {
    if (layout.total_qubits() != state.num_qubits()) throw DimensionError("apply_oracle: layout does not match state");
    int in_width = 0;
    for (int r : input_regs) in_width += layout.width(r);
    if (in_width != f.input_bits) throw DimensionError("apply_oracle: input width mismatch");
    if (layout.width(output_reg) != f.output_bits) throw DimensionError("apply_oracle: output width mismatch");

    Vector out = Vector::Zero(state.dim());
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        const Complex a = state[i];
        if (a == Complex{}) continue;
        const auto idx = static_cast<std::uint64_t>(i);
        std::uint64_t x = 0;
        for (int r : input_regs) x = (x << layout.width(r)) | layout.value(idx, r);
        const std::uint64_t fx = f.eval(x);
        if (f.output_bits < 64 && fx >> f.output_bits) throw DimensionError("apply_oracle: f(x) wider than output");
        const std::uint64_t w = layout.value(idx, output_reg) ^ fx;
        out[static_cast<Eigen::Index>(layout.with_value(idx, output_reg, w))] += a;
    }
    return StateVector::normalized(state.num_qubits(), std::move(out));
}

Measurement measure(const StateVector& state, const RegisterLayout& layout, std::span<const int> regs, Rng& rng) {
    if (layout.total_qubits() != state.num_qubits()) throw DimensionError("measure: layout does not match state");
    auto key_of = [&](std::uint64_t idx) {
        std::vector<std::uint64_t> k;
        k.reserve(regs.size());
        for (int r : regs) k.push_back(layout.value(idx, r));
        return k;
    };
    // Ordered outcome table keeps sampling deterministic for a fixed stream.
    std::map<std::vector<std::uint64_t>, double> probs;
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state[i]);
        if (p > 0.0) probs[key_of(static_cast<std::uint64_t>(i))] += p;
    }
    double total = 0.0;
    for (auto& [k, p] : probs) {
        if (p >= kMinOutcomeProbability) total += p;
    }
    double u = rng.uniform() * total;
    const std::vector<std::uint64_t>* chosen = nullptr;
    double chosen_p = 0.0;
    for (auto& [k, p] : probs) {
        if (p < kMinOutcomeProbability) continue;
        chosen = &k;
        chosen_p = p;
        if (u < p) break;
        u -= p;
    }
    Vector post = Vector::Zero(state.dim());
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        if (state[i] != Complex{} && key_of(static_cast<std::uint64_t>(i)) == *chosen) post[i] = state[i];
    }
    return Measurement{*chosen, chosen_p, StateVector::normalized(state.num_qubits(), std::move(post))};
}

double swap_test(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) throw DimensionError("swap_test: qubit count mismatch");
    return 0.5 * (1.0 + fidelity(a, b));
}

bool swap_test_sample(const StateVector& a, const StateVector& b, Rng& rng) { return rng.bernoulli(swap_test(a, b)); }

DensityOperator::DensityOperator(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols()) throw DimensionError("density operator must be square");
    if (matrix_.rows() > (Eigen::Index{1} << kMaxDensityQubits)) throw DimensionError("density operator dimension cap exceeded");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kNormTolerance) {
        throw std::invalid_argument("density operator is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > kNormTolerance) {
        throw std::invalid_argument("density operator trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kNormTolerance) {
        throw std::invalid_argument("density operator has a negative eigenvalue");
    }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
    return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    return trace_distance(rho.matrix(), sigma.matrix());
}

StateVector haar_sample(int n, Rng& rng) {
    if (n < 1) throw DimensionError("haar_sample: need at least one qubit");
    check_qubits(n);
    Vector v(Eigen::Index{1} << n);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v[i] = Complex(re, im);
    }
    return StateVector::normalized(n, std::move(v));
}

StateVector type_state(std::span<const std::uint64_t> xs, int bits) {
    if (xs.empty()) throw std::invalid_argument("type_state: empty tuple");
    const int t = static_cast<int>(xs.size());
    check_qubits(bits * t);
    if (std::set<std::uint64_t>(xs.begin(), xs.end()).size() != xs.size()) {
        throw std::invalid_argument("type_state: entries must be distinct");
    }
    for (auto x : xs) {
        if (bits < 64 && x >> bits) throw std::out_of_range("type_state: entry wider than register");
    }
    RegisterLayout layout(std::vector<int>(t, bits));
    std::vector<int> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    Vector v = Vector::Zero(Eigen::Index{1} << (bits * t));
    std::vector<std::uint64_t> label(t);
    do {
        for (int i = 0; i < t; ++i) label[i] = xs[perm[i]];
        v[static_cast<Eigen::Index>(layout.compose(label))] += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return StateVector::normalized(bits * t, std::move(v));
}

StateVector permute_registers(const StateVector& state, const RegisterLayout& layout, std::span<const int> perm) {
    if (static_cast<int>(perm.size()) != layout.num_registers()) throw std::invalid_argument("permutation arity mismatch");
    std::vector<int> widths;
    for (int p : perm) widths.push_back(layout.width(p));
    RegisterLayout out_layout(widths);
    Vector v = Vector::Zero(state.dim());
    std::vector<std::uint64_t> vals(perm.size());
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        for (std::size_t r = 0; r < perm.size(); ++r) vals[r] = layout.value(static_cast<std::uint64_t>(i), perm[r]);
        v[static_cast<Eigen::Index>(out_layout.compose(vals))] = state[i];
    }
    return StateVector(state.num_qubits(), std::move(v));
}

void walsh_hadamard(Vector& v) {
    const Eigen::Index n = v.size();
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index h = 1; h < n; h <<= 1) {
        for (Eigen::Index i = 0; i < n; i += 2 * h) {
            for (Eigen::Index j = i; j < i + h; ++j) {
                const Complex a = v[j];
                const Complex b = v[j + h];
                v[j] = (a + b) * s;
                v[j + h] = (a - b) * s;
            }
        }
    }
}

Vector apply_on_register(const Vector& v, const RegisterLayout& layout, int reg, const Matrix& op) {
    const int w = layout.width(reg);
    const Eigen::Index local = Eigen::Index{1} << w;
    if (op.rows() != local || op.cols() != local) throw DimensionError("apply_on_register: operator size mismatch");
    if (v.size() != (Eigen::Index{1} << layout.total_qubits())) throw DimensionError("apply_on_register: vector size mismatch");
    Vector out = Vector::Zero(v.size());
    const std::uint64_t reg_mask = (local - 1) << layout.shift(reg);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        if (idx & reg_mask) continue;  // visit each "rest" configuration once
        for (Eigen::Index col = 0; col < local; ++col) {
            const Complex a = v[static_cast<Eigen::Index>(idx | (static_cast<std::uint64_t>(col) << layout.shift(reg)))];
            if (a == Complex{}) continue;
            for (Eigen::Index row = 0; row < local; ++row) {
                out[static_cast<Eigen::Index>(idx | (static_cast<std::uint64_t>(row) << layout.shift(reg)))] += op(row, col) * a;
            }
        }
    }
    return out;
}

}  // namespace unclone
