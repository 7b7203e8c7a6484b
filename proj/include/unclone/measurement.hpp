#pragma once

#include <span>
#include <vector>

#include "unclone/hilbert.hpp"

namespace unclone {

/// The accepting element P of a two-outcome POVM (P, I - P).
class BinaryPovm {
public:
    /// Requires 0 <= P <= I within kNormTolerance.
    explicit BinaryPovm(Matrix op);

    const Matrix& op() const { return op_; }
    Eigen::Index dim() const { return op_.rows(); }

private:
    Matrix op_;
};

/// Spectral refinement of a binary POVM: measuring {projectors[i]} and then
/// accepting with probability eigenvalues[i] reproduces (P, I - P).
struct ProjImp {
    std::vector<double> eigenvalues;  // ascending, distinct
    std::vector<Matrix> projectors;

    Matrix reconstruct() const;
};

/// Eigenvalues closer than this are treated as one outcome.
inline constexpr double kEigenvalueMergeTolerance = 1e-9;

ProjImp projective_implementation(const BinaryPovm& povm);

struct WeightedProjector {
    double probability;
    Matrix projector;
};

/// P_D = sum_i Pr[i] P_i over binary projective measurements.
BinaryPovm mixture_povm(std::span<const WeightedProjector> dist);

struct ThresholdOutcome {
    bool bit;
    double eigenvalue;  // the sampled ProjImp outcome
    StateVector post;
};

struct ThresholdDensityOutcome {
    bool bit;
    double eigenvalue;
    DensityOperator post;
};

/// Threshold implementation: measure ProjImp(P), output 1 iff the sampled
/// eigenvalue is at least t.
ThresholdOutcome threshold_measure(const BinaryPovm& povm, double threshold, const StateVector& state, Rng& rng);
ThresholdDensityOutcome threshold_measure(const BinaryPovm& povm, double threshold, const DensityOperator& rho, Rng& rng);

/// Tr[TI_t(P) rho] for a pure state.
double threshold_accept_probability(const BinaryPovm& povm, double threshold, const StateVector& state);

/// Threshold implementation of a POVM acting on one register of a larger pure state.
ThresholdOutcome threshold_measure_register(const BinaryPovm& povm, double threshold, const StateVector& state,
                                            const RegisterLayout& layout, int reg, Rng& rng);

}  // namespace unclone
