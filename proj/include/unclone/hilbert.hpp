#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "unclone/bytes.hpp"
#include "unclone/rng.hpp"

namespace unclone {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Dense pure states refuse more amplitudes than this.
inline constexpr int kMaxStateQubits = 20;
/// Dense mixed states refuse larger dimensions than 2^kMaxDensityQubits.
inline constexpr int kMaxDensityQubits = 10;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kSpectralTolerance = 1e-8;
/// Outcomes below this probability are never returned by a measurement.
inline constexpr double kMinOutcomeProbability = 1e-12;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unit vector of 2^num_qubits amplitudes in the computational basis.
///
/// Basis index bit (num_qubits - 1 - q) is qubit q, i.e. qubit 0 is the most
/// significant bit and the leftmost register in ket notation. A zero-qubit
/// state is the scalar 1 and is used as the trivial payload of hybrid states.
class StateVector {
public:
    StateVector() : StateVector(unit()) {}
    /// Validates length and norm (within kNormTolerance).
    StateVector(int num_qubits, Vector amplitudes);

    /// Scales `v` to unit norm; throws on a zero vector.
    static StateVector normalized(int num_qubits, Vector v);
    static StateVector basis(int num_qubits, std::uint64_t index);
    static StateVector unit();

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

    /// u32 num_qubits, then interleaved (re, im) f64 pairs in basis order.
    Bytes serialize() const;
    static StateVector deserialize(ByteView data);

private:
    int num_qubits_;
    Vector amplitudes_;
};

void check_qubits(int num_qubits, int cap = kMaxStateQubits);

Complex inner(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);
/// a occupies the high-order qubits of the result.
StateVector tensor(const StateVector& a, const StateVector& b);
StateVector tensor(std::span<const StateVector> factors);

/// Splits a basis index into named registers. Register 0 is the leftmost
/// (most significant) one.
class RegisterLayout {
public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<int> widths);

    int total_qubits() const { return total_; }
    int num_registers() const { return static_cast<int>(widths_.size()); }
    int width(int reg) const { return widths_.at(reg); }
    /// Bit offset of the register's least significant bit.
    int shift(int reg) const { return shifts_.at(reg); }

    std::uint64_t value(std::uint64_t index, int reg) const;
    std::uint64_t with_value(std::uint64_t index, int reg, std::uint64_t value) const;
    std::uint64_t compose(std::span<const std::uint64_t> values) const;

private:
    std::vector<int> widths_;
    std::vector<int> shifts_;
    int total_ = 0;
};

struct BasisTerm {
    std::vector<std::uint64_t> label;  // one value per register
    Complex amplitude;
};

/// Normalised superposition of the given basis terms.
StateVector superpose(const RegisterLayout& layout, std::span<const BasisTerm> terms);

struct ClassicalFunction {
    int input_bits;
    int output_bits;
    std::function<std::uint64_t(std::uint64_t)> eval;
};

/// |x>|w> -> |x>|w xor f(x)>, where x is the concatenation of `input_regs`.
StateVector apply_oracle(const StateVector& state, const RegisterLayout& layout, std::span<const int> input_regs,
                         int output_reg, const ClassicalFunction& f);

struct Measurement {
    std::vector<std::uint64_t> outcome;  // one value per measured register
    double probability;
    StateVector post;
};

/// Born-rule measurement of the listed registers in the computational basis.
Measurement measure(const StateVector& state, const RegisterLayout& layout, std::span<const int> regs, Rng& rng);

/// Acceptance probability (1 + |<a|b>|^2) / 2.
double swap_test(const StateVector& a, const StateVector& b);
bool swap_test_sample(const StateVector& a, const StateVector& b, Rng& rng);

/// Unit-trace positive semidefinite operator.
class DensityOperator {
public:
    explicit DensityOperator(Matrix m);
    static DensityOperator pure(const StateVector& psi);
    static DensityOperator maximally_mixed(Eigen::Index dim);

    Eigen::Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }

private:
    Matrix matrix_;
};

/// Half the trace norm of the difference. Works for any real or complex
/// self-adjoint dense expression.
template <typename DerivedA, typename DerivedB>
double trace_distance(const Eigen::MatrixBase<DerivedA>& rho, const Eigen::MatrixBase<DerivedB>& sigma) {
    using Scalar = typename DerivedA::Scalar;
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw DimensionError("trace_distance: dimension mismatch");
    }
    Dense diff = rho - sigma;
    Eigen::SelfAdjointEigenSolver<Dense> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Haar-random pure state on n qubits (normalised complex Gaussian).
StateVector haar_sample(int n, Rng& rng);

/// Unit-norm symmetrisation of distinct n-bit strings over t = xs.size()
/// registers: (1/sqrt(t!)) sum_pi |x_pi(1)> ... |x_pi(t)>.
StateVector type_state(std::span<const std::uint64_t> xs, int bits);

/// Reorders registers: register `perm[i]` of the input becomes register i.
StateVector permute_registers(const StateVector& state, const RegisterLayout& layout, std::span<const int> perm);

/// H on every qubit, in place (unnormalised vectors allowed).
void walsh_hadamard(Vector& v);

/// Applies `op` (2^w x 2^w) to register `reg` of `v`, leaving other registers untouched.
Vector apply_on_register(const Vector& v, const RegisterLayout& layout, int reg, const Matrix& op);

}  // namespace unclone
