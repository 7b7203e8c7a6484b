#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "unclone/hilbert.hpp"

namespace unclone {

inline constexpr int kMiniMaxBits = 12;

/// Subspace of GF(2)^n of dimension n/2. A vector is an n-bit integer whose
/// most significant bit is coordinate 0, matching basis-state indexing.
class Subspace {
public:
    /// `rows` must already be in reduced row echelon form (pivot = highest set bit,
    /// pivots strictly decreasing, pivot columns cleared in other rows).
    Subspace(int n, std::vector<std::uint32_t> rows);

    int n() const { return n_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<std::uint32_t>& basis() const { return rows_; }
    const std::vector<std::uint32_t>& dual_basis() const { return dual_; }

    bool contains(std::uint32_t x) const;
    bool dual_contains(std::uint32_t y) const;
    std::vector<std::uint32_t> elements() const;
    std::vector<std::uint32_t> dual_elements() const;

    /// u8 n, then each row as ceil(n/8) big-endian bytes, in echelon order.
    Bytes serialize() const;
    static std::optional<Subspace> parse(ByteView sn);

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }

private:
    int n_;
    std::vector<std::uint32_t> rows_;
    std::vector<std::uint32_t> dual_;
};

/// Uniform n/2-dimensional subspace derived deterministically from `randomness`.
Subspace sample_subspace(int n, ByteView randomness);

/// Number of n/2-dimensional subspaces, i.e. the normalising weight of the sampler.
std::uint64_t subspace_count(int n);

/// |A> = |A|^{-1/2} sum_{a in A} |a>.
StateVector subspace_state(const Subspace& a);

struct MiniBanknote {
    Bytes sn;
    StateVector note;
};

MiniBanknote mini_gen(int n, ByteView randomness);

struct MiniVerifyOutcome {
    bool bit;
    StateVector post;
    double accept_probability;
};

/// Pi_A, then H on all qubits, Pi_{A-perp}, H again. A failed first check
/// leaves the (I - Pi_A) branch; a failed second leaves H (I - Pi_perp) H Pi_A.
MiniVerifyOutcome mini_verify(const Subspace& a, const StateVector& note, Rng& rng);
/// Unparseable serial numbers and dimension mismatches reject with certainty.
MiniVerifyOutcome mini_verify(ByteView sn, const StateVector& note, Rng& rng);

/// Exact acceptance probability ||Pi_perp H Pi_A psi||^2.
double mini_accept_probability(const Subspace& a, const StateVector& note);
/// The accepting operator H Pi_perp H Pi_A as a dense matrix (equal to |A><A|).
Matrix mini_verify_operator(const Subspace& a);
/// Applies H Pi_perp H Pi_A to an unnormalised vector.
Vector mini_accept_branch(const Subspace& a, const Vector& v);

enum class MiniAttack { kMeasureClone, kZeroPad, kHadamardClone };

MiniAttack parse_mini_attack(std::string_view name);
std::string_view to_string(MiniAttack attack);

std::pair<StateVector, StateVector> mini_counterfeit(MiniAttack attack, const StateVector& note, Rng& rng);

}  // namespace unclone
