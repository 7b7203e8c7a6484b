#include "unclone/prs.hpp"

#include <cmath>
#include <stdexcept>

namespace unclone {

namespace {

template <typename F>
std::vector<Complex> binary_phase(int n, F&& bit) {
    check_qubits(n);
    const std::uint64_t dim = std::uint64_t{1} << n;
    const double a = std::pow(2.0, -0.5 * n);
    std::vector<Complex> out(dim);
    for (std::uint64_t x = 0; x < dim; ++x) out[x] = bit(x) ? -a : a;
    return out;
}

StateVector to_state(int n, const std::vector<Complex>& amps) {
    return StateVector(n, Eigen::Map<const Vector>(amps.data(), static_cast<Eigen::Index>(amps.size())));
}

}  // namespace

PrsKey prs_setup(int n, Rng& rng) {
    check_qubits(n);
    if (n < 1) throw DimensionError("prs: need at least one qubit");
    return PrsKey{PprfKey::generate(n, 1, rng)};
}

std::vector<Complex> prs_amplitudes(const PrsKey& key) {
    return binary_phase(key.num_qubits(), [&](std::uint64_t x) { return key.k.eval_bits(x) != 0; });
}

StateVector prs_state(const PrsKey& key) { return to_state(key.num_qubits(), prs_amplitudes(key)); }

std::vector<Complex> phase_amplitudes(const KwiseFunction& f) {
    if (f.output_bits() != 1) throw std::invalid_argument("phase_amplitudes: function must have one output bit");
    return binary_phase(f.field().bits(), [&](std::uint64_t x) { return (f.eval(x) & 1u) != 0; });
}

StateVector phase_state(const KwiseFunction& f) { return to_state(f.field().bits(), phase_amplitudes(f)); }

}  // namespace unclone
