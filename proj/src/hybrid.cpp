#include "unclone/hybrid.hpp"

#include <cmath>

namespace unclone {

Bytes encode_label_value(std::uint64_t value, std::size_t num_bytes) {
    Bytes out(num_bytes);
    for (std::size_t i = 0; i < num_bytes; ++i) out[num_bytes - 1 - i] = static_cast<std::uint8_t>(value >> (8 * i));
    if (num_bytes < 8 && value >> (8 * num_bytes)) throw std::out_of_range("label value does not fit");
    return out;
}

std::uint64_t decode_label_value(ByteView bytes) {
    if (bytes.size() > 8) throw std::out_of_range("label component wider than 64 bits");
    std::uint64_t v = 0;
    for (auto b : bytes) v = (v << 8) | b;
    return v;
}

namespace {

// Below this the merged branch is treated as cancelled.
constexpr double kCancelTolerance = 1e-14;

}  // namespace

HybridState::HybridState(int payload_qubits, std::vector<Term> terms, Normalization mode)
    : payload_qubits_(payload_qubits) {
    check_qubits(payload_qubits);
    struct Pending {
        Vector sum;
        std::size_t count;
        std::size_t first;
    };
    std::map<Label, Pending> acc;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (t.payload.num_qubits() != payload_qubits) throw DimensionError("hybrid term payload has wrong qubit count");
        Vector v = t.amplitude * t.payload.amplitudes();
        auto [it, inserted] = acc.try_emplace(t.label, Pending{v, 1, i});
        if (!inserted) {
            it->second.sum += v;
            ++it->second.count;
        }
    }
    auto table = std::make_shared<std::map<Label, Branch>>();
    double total = 0.0;
    for (auto& [label, pending] : acc) {
        const double n = pending.sum.norm();
        if (n < kCancelTolerance) continue;
        if (pending.count == 1) {
            // Unmerged terms keep the caller's (amplitude, payload) split.
            auto& t = terms[pending.first];
            table->emplace(label, Branch{t.amplitude, std::move(t.payload)});
        } else {
            table->emplace(label, Branch{Complex(n), StateVector(payload_qubits, pending.sum / n)});
        }
        total += n * n;
    }
    if (table->empty()) throw std::invalid_argument("hybrid state has no surviving branches");
    if (mode == Normalization::kRenormalize) {
        const double s = 1.0 / std::sqrt(total);
        for (auto& [label, b] : *table) b.amplitude *= s;
    } else if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::invalid_argument("hybrid state is not normalised");
    }
    branches_ = std::move(table);
}

HybridState HybridState::product(Label label, StateVector payload) {
    const int q = payload.num_qubits();
    std::vector<Term> terms;
    terms.push_back(Term{std::move(label), Complex(1.0), std::move(payload)});
    return HybridState(q, std::move(terms));
}

const Branch* HybridState::find(const Label& label) const {
    auto it = branches_->find(label);
    return it == branches_->end() ? nullptr : &it->second;
}

double HybridState::squared_norm() const {
    double total = 0.0;
    for (const auto& [label, b] : *branches_) total += std::norm(b.amplitude) * b.payload.amplitudes().squaredNorm();
    return total;
}

StateVector HybridState::densify(std::span<const int> label_bits) const {
    int label_qubits = 0;
    for (int w : label_bits) label_qubits += w;
    const int total = label_qubits + payload_qubits_;
    check_qubits(total);
    std::vector<int> widths(label_bits.begin(), label_bits.end());
    widths.push_back(payload_qubits_);
    RegisterLayout layout(widths);
    Vector v = Vector::Zero(Eigen::Index{1} << total);
    std::vector<std::uint64_t> values(widths.size(), 0);
    for (const auto& [label, b] : *branches_) {
        if (label.size() != label_bits.size()) throw DimensionError("densify: label arity mismatch");
        for (std::size_t i = 0; i < label.size(); ++i) values[i] = decode_label_value(label[i]);
        values.back() = 0;
        const auto base = static_cast<Eigen::Index>(layout.compose(values));
        v.segment(base, b.payload.dim()) += b.amplitude * b.payload.amplitudes();
    }
    return StateVector(total, std::move(v));
}

HybridState HybridState::map_branches(int payload_qubits,
                                      const std::function<std::vector<Term>(const Label&, const Branch&)>& fn,
                                      Normalization mode) const {
    std::vector<Term> terms;
    for (const auto& [label, b] : *branches_) {
        auto produced = fn(label, b);
        for (auto& t : produced) terms.push_back(std::move(t));
    }
    return HybridState(payload_qubits, std::move(terms), mode);
}

Complex inner(const HybridState& a, const HybridState& b) {
    if (a.payload_qubits() != b.payload_qubits()) throw DimensionError("inner: payload qubit mismatch");
    Complex acc = 0.0;
    // Walk the smaller table and look up in the larger one.
    const bool a_small = a.size() <= b.size();
    const auto& small = a_small ? a : b;
    const auto& large = a_small ? b : a;
    for (const auto& [label, bs] : small.branches()) {
        const Branch* bl = large.find(label);
        if (!bl) continue;
        const Branch& ba = a_small ? bs : *bl;
        const Branch& bb = a_small ? *bl : bs;
        acc += std::conj(ba.amplitude) * bb.amplitude * inner(ba.payload, bb.payload);
    }
    return acc;
}

double distance(const HybridState& a, const HybridState& b) {
    if (a.payload_qubits() != b.payload_qubits()) throw DimensionError("distance: payload qubit mismatch");
    double total = 0.0;
    for (const auto& [label, ba] : a.branches()) {
        const Vector va = ba.amplitude * ba.payload.amplitudes();
        if (const Branch* bb = b.find(label)) {
            total += (va - bb->amplitude * bb->payload.amplitudes()).squaredNorm();
        } else {
            total += va.squaredNorm();
        }
    }
    for (const auto& [label, bb] : b.branches()) {
        if (!a.find(label)) total += std::norm(bb.amplitude);
    }
    return std::sqrt(total);
}

HybridState tensor(const HybridState& a, const HybridState& b) {
    std::vector<HybridState::Term> terms;
    terms.reserve(a.size() * b.size());
    for (const auto& [la, ba] : a.branches()) {
        for (const auto& [lb, bb] : b.branches()) {
            Label l = la;
            l.insert(l.end(), lb.begin(), lb.end());
            terms.push_back({std::move(l), ba.amplitude * bb.amplitude, tensor(ba.payload, bb.payload)});
        }
    }
    return HybridState(a.payload_qubits() + b.payload_qubits(), std::move(terms));
}

LabelMeasurement measure_labels(const HybridState& state, Rng& rng) {
    double total = 0.0;
    for (const auto& [label, b] : state.branches()) {
        const double p = std::norm(b.amplitude);
        if (p >= kMinOutcomeProbability) total += p;
    }
    double u = rng.uniform() * total;
    const std::pair<const Label, Branch>* chosen = nullptr;
    for (const auto& entry : state.branches()) {
        const double p = std::norm(entry.second.amplitude);
        if (p < kMinOutcomeProbability) continue;
        chosen = &entry;
        if (u < p) break;
        u -= p;
    }
    if (!chosen) throw std::logic_error("measure_labels: no branch with positive probability");
    return {chosen->first, std::norm(chosen->second.amplitude), chosen->second.payload};
}

}  // namespace unclone
