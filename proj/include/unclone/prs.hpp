#pragma once

#include <vector>

#include "unclone/hilbert.hpp"
#include "unclone/kwise.hpp"
#include "unclone/pprf.hpp"

namespace unclone {

/// Binary-phase pseudorandom state key: |psi_k> = 2^{-n/2} sum_x (-1)^{F_k(x)} |x>.
struct PrsKey {
    PprfKey k;  // n input bits, 1 output bit

    int num_qubits() const { return k.input_bits(); }
};

PrsKey prs_setup(int n, Rng& rng);

std::vector<Complex> prs_amplitudes(const PrsKey& key);
StateVector prs_state(const PrsKey& key);

/// Same phase construction driven by a k-wise independent function with one
/// output bit; the field exponent equals the qubit count.
std::vector<Complex> phase_amplitudes(const KwiseFunction& f);
StateVector phase_state(const KwiseFunction& f);

}  // namespace unclone
