#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "unclone/hilbert.hpp"

namespace unclone {

/// Classical part of a hybrid branch: one byte string per classical register.
using Label = std::vector<Bytes>;

/// Big-endian fixed-width encoding of a small integer label component.
Bytes encode_label_value(std::uint64_t value, std::size_t num_bytes);
std::uint64_t decode_label_value(ByteView bytes);

struct Branch {
    Complex amplitude;
    StateVector payload;  // unit norm; zero qubits for a purely classical branch
};

/// Superposition sum_l amp_l |l> (x) |payload_l> whose classical registers are
/// too wide to hold as qubits (signatures, serial numbers).
///
/// Branches are kept in canonical form: at most one branch per label, ordered
/// by label. The branch table is shared and never mutated, so copies are cheap
/// and safe across threads.
class HybridState {
public:
    struct Term {
        Label label;
        Complex amplitude;
        StateVector payload;
    };

    enum class Normalization { kRequireUnit, kRenormalize };

    /// Terms with equal labels are merged by summing amplitude * payload.
    HybridState(int payload_qubits, std::vector<Term> terms, Normalization mode = Normalization::kRequireUnit);

    static HybridState product(Label label, StateVector payload);

    int payload_qubits() const { return payload_qubits_; }
    std::size_t size() const { return branches_->size(); }
    const std::map<Label, Branch>& branches() const { return *branches_; }
    const Branch* find(const Label& label) const;

    /// Squared norm; 1 within kNormTolerance for every constructed state.
    double squared_norm() const;

    /// Full state vector with each label component written as a `label_bits[i]`
    /// wide register ahead of the payload qubits.
    StateVector densify(std::span<const int> label_bits) const;

    /// Rebuilds the state from a per-branch map (e.g. an oracle query).
    HybridState map_branches(int payload_qubits, const std::function<std::vector<Term>(const Label&, const Branch&)>& fn,
                             Normalization mode = Normalization::kRequireUnit) const;

private:
    HybridState(int payload_qubits, std::shared_ptr<const std::map<Label, Branch>> branches)
        : payload_qubits_(payload_qubits), branches_(std::move(branches)) {}

    int payload_qubits_;
    std::shared_ptr<const std::map<Label, Branch>> branches_;
};

Complex inner(const HybridState& a, const HybridState& b);
/// Euclidean distance between the two vectors.
double distance(const HybridState& a, const HybridState& b);
/// Labels concatenate, payloads tensor (a's payload is high-order).
HybridState tensor(const HybridState& a, const HybridState& b);

struct LabelMeasurement {
    Label label;
    double probability;
    StateVector payload;
};

/// Measures every classical register, leaving the branch payload.
LabelMeasurement measure_labels(const HybridState& state, Rng& rng);

}  // namespace unclone
