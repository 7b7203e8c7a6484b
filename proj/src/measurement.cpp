#include "unclone/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace unclone {

BinaryPovm::BinaryPovm(Matrix op) : op_(std::move(op)) {
    if (op_.rows() != op_.cols()) throw DimensionError("POVM element must be square");
    if ((op_ - op_.adjoint()).cwiseAbs().maxCoeff() > kNormTolerance) {
        throw std::invalid_argument("POVM element is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(op_, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < -kNormTolerance || ev.maxCoeff() > 1.0 + kNormTolerance) {
        throw std::invalid_argument("POVM element is not between 0 and I");
    }
}

Matrix ProjImp::reconstruct() const {
    if (projectors.empty()) return {};
    Matrix m = Matrix::Zero(projectors.front().rows(), projectors.front().cols());
    for (std::size_t i = 0; i < projectors.size(); ++i) m += eigenvalues[i] * projectors[i];
    return m;
}

ProjImp projective_implementation(const BinaryPovm& povm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(povm.op());
    const auto& values = es.eigenvalues();
    const auto& vectors = es.eigenvectors();
    ProjImp out;
    Eigen::Index start = 0;
    while (start < values.size()) {
        Eigen::Index end = start + 1;
        while (end < values.size() && values[end] - values[end - 1] <= kEigenvalueMergeTolerance) ++end;
        const auto block = vectors.middleCols(start, end - start);
        // Eigenvalues of a valid POVM lie in [0, 1]; clamp the solver's rounding.
        const double mean = values.segment(start, end - start).mean();
        out.eigenvalues.push_back(std::clamp(mean, 0.0, 1.0));
        out.projectors.push_back(block * block.adjoint());
        start = end;
    }
    return out;
}

BinaryPovm mixture_povm(std::span<const WeightedProjector> dist) {
    if (dist.empty()) throw std::invalid_argument("mixture_povm: empty distribution");
    double total = 0.0;
    const Eigen::Index dim = dist.front().projector.rows();
    Matrix op = Matrix::Zero(dim, dim);
    for (const auto& [p, proj] : dist) {
        if (p < 0.0) throw std::invalid_argument("mixture_povm: negative probability");
        if (proj.rows() != dim || proj.cols() != dim) throw DimensionError("mixture_povm: projector size mismatch");
        if ((proj * proj - proj).cwiseAbs().maxCoeff() > kSpectralTolerance ||
            (proj - proj.adjoint()).cwiseAbs().maxCoeff() > kSpectralTolerance) {
            throw std::invalid_argument("mixture_povm: entry is not an orthogonal projector");
        }
        total += p;
        op += p * proj;
    }
    if (std::abs(total - 1.0) > kNormTolerance) throw std::invalid_argument("mixture_povm: probabilities do not sum to 1");
    // Symmetrise away rounding so the Hermitian check in BinaryPovm is exact.
    Matrix herm = 0.5 * (op + op.adjoint());
    return BinaryPovm(std::move(herm));
}

namespace {

bool passes(double eigenvalue, double threshold) { return eigenvalue >= threshold - kNormTolerance; }

void check_threshold(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
}

// Picks index i with probability weights[i] / sum, skipping negligible entries.
std::size_t sample_index(const std::vector<double>& weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) {
        if (w >= kMinOutcomeProbability) total += w;
    }
    double u = rng.uniform() * total;
    std::size_t chosen = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < kMinOutcomeProbability) continue;
        chosen = i;
        if (u < weights[i]) break;
        u -= weights[i];
    }
    if (chosen == weights.size()) throw std::logic_error("measurement has no outcome with positive probability");
    return chosen;
}

}  // namespace

ThresholdOutcome threshold_measure(const BinaryPovm& povm, double threshold, const StateVector& state, Rng& rng) {
    check_threshold(threshold);
    if (povm.dim() != state.dim()) throw DimensionError("threshold_measure: dimension mismatch");
    const ProjImp pi = projective_implementation(povm);
    std::vector<double> weights;
    for (const auto& proj : pi.projectors) weights.push_back((proj * state.amplitudes()).squaredNorm());
    const std::size_t i = sample_index(weights, rng);
    Vector post = pi.projectors[i] * state.amplitudes();
    return {passes(pi.eigenvalues[i], threshold), pi.eigenvalues[i],
            StateVector::normalized(state.num_qubits(), std::move(post))};
}

ThresholdDensityOutcome threshold_measure(const BinaryPovm& povm, double threshold, const DensityOperator& rho,
                                          Rng& rng) {
    check_threshold(threshold);
    if (povm.dim() != rho.dim()) throw DimensionError("threshold_measure: dimension mismatch");
    const ProjImp pi = projective_implementation(povm);
    std::vector<double> weights;
    for (const auto& proj : pi.projectors) weights.push_back((proj * rho.matrix()).trace().real());
    const std::size_t i = sample_index(weights, rng);
    Matrix post = pi.projectors[i] * rho.matrix() * pi.projectors[i];
    post /= post.trace().real();
    post = 0.5 * (post + post.adjoint()).eval();
    return {passes(pi.eigenvalues[i], threshold), pi.eigenvalues[i], DensityOperator(std::move(post))};
}

double threshold_accept_probability(const BinaryPovm& povm, double threshold, const StateVector& state) {
    check_threshold(threshold);
    const ProjImp pi = projective_implementation(povm);
    double p = 0.0;
    for (std::size_t i = 0; i < pi.projectors.size(); ++i) {
        if (passes(pi.eigenvalues[i], threshold)) p += (pi.projectors[i] * state.amplitudes()).squaredNorm();
    }
    return p;
}

ThresholdOutcome threshold_measure_register(const BinaryPovm& povm, double threshold, const StateVector& state,
                                            const RegisterLayout& layout, int reg, Rng& rng) {
    check_threshold(threshold);
    const ProjImp pi = projective_implementation(povm);
    std::vector<Vector> branches;
    std::vector<double> weights;
    for (const auto& proj : pi.projectors) {
        branches.push_back(apply_on_register(state.amplitudes(), layout, reg, proj));
        weights.push_back(branches.back().squaredNorm());
    }
    const std::size_t i = sample_index(weights, rng);
    return {passes(pi.eigenvalues[i], threshold), pi.eigenvalues[i],
            StateVector::normalized(state.num_qubits(), std::move(branches[i]))};
}

}  // namespace unclone
