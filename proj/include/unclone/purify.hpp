#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "unclone/hybrid.hpp"
#include "unclone/kwise.hpp"
#include "unclone/pprf.hpp"
#include "unclone/prs.hpp"

namespace unclone {

/// A generator with classically determined outputs: (z, randomness) -> pure state.
struct GenStateSpec {
    Bytes z;
    int randomness_bits = 256;
    int payload_qubits = 0;
    std::function<StateVector(ByteView z, ByteView randomness)> generator;

    StateVector run(ByteView randomness) const;
};

inline constexpr int kPurifyMaxLabelQubits = 12;
inline constexpr int kPurifyMaxPayloadQubits = 6;
inline constexpr int kMaxSymmetrisedCopies = 6;

/// sum_x alpha_{k,x} |x> (x) |GenState(z; F(K, x))>, one branch per x.
/// `prf` maps the PRS qubit count to `spec.randomness_bits` output bits.
HybridState purified_state(const GenStateSpec& spec, const PrsKey& prs, const PprfKey& prf);
/// Same with the PRS swapped for a k-wise phase state and F for a k-wise function table.
HybridState purified_state(const GenStateSpec& spec, std::span<const Complex> amplitudes,
                           const std::function<Bytes(std::uint64_t)>& randomness);

/// t! permutation sum over (label, payload) pairs, unit norm:
/// (1/sqrt(t!)) sum_pi |x_pi(1)>..|x_pi(t)> (x) |phi_pi(1)>..|phi_pi(t)>.
/// Labels come first; payload i travels with label i. Labels must be distinct.
HybridState symmetrise_pairs(std::span<const std::uint64_t> xs, int label_bits, std::span<const StateVector> payloads);
/// Draws t distinct labels and symmetrises them with the samples.
HybridState simulate_copies(std::span<const StateVector> samples, int label_bits, Rng& rng);

/// Draws t distinct n-bit strings uniformly.
std::vector<std::uint64_t> sample_distinct(int bits, int t, Rng& rng);

struct CompilerEquivalenceReport {
    int n;
    int t;
    std::vector<std::uint64_t> xs;
    double exact_gap;
};

/// Builds the type-state route (the coherent generator applied to
/// |type(x_1..x_t)>) and the simulator route (symmetrise_pairs over the samples
/// GenState(z; H(x_j))) from one transcript, with H a uniformly random table.
CompilerEquivalenceReport compiler_equivalence_check(const GenStateSpec& spec, int n, int t, Rng& rng);

struct TypeHaarReport {
    int n;
    int t;
    double td_exact;
    double bound;                          // 4 t^2 / 2^n
    std::optional<double> td_monte_carlo;  // dense route only
    int haar_samples;
    std::uint64_t seed;
};

/// Trace distance between the Haar t-copy average and the uniform average of
/// distinct-type projectors. Both operators live in the symmetric subspace, so
/// they are assembled in its occupation basis and compared there.
TypeHaarReport type_vs_haar_distance(int n, int t, int haar_samples, Rng& rng);
/// Full 2^{nt} dimensional computation through permutation operators; n t <= 10.
double type_vs_haar_distance_dense(int n, int t);

struct SmallRangeParams {
    int k = 2;
    int ell = 32;
    int domain_bits = 6;
    double p = 1.0;
    double c_osrd = 16.0;

    /// ell = C_OSRD * p^2 * k^3.
    static SmallRangeParams derived(int k, double p, int domain_bits, double c_osrd = 16.0);
    void validate() const;
};

struct SmallRangeResult {
    HybridState phi;
    std::optional<HybridState> phi0;  // empty when no tuple has distinct P values
    double overlap;                   // |<phi|phi0>|^2
    double distinct_weight;           // ||zeta_empty||^2
};

/// Each query is a normalised amplitude list over the domain; labels are
/// (x_1, .., x_k) and the payload is psi_{P(x_1)} (x) .. (x) psi_{P(x_k)}.
SmallRangeResult small_range_states(const SmallRangeParams& params, std::span<const std::vector<Complex>> queries,
                                    std::span<const StateVector> samples, std::span<const int> p_map);
/// ||zeta_empty||^2 from per-bucket query weights, without building states.
double small_range_overlap(int ell, std::span<const std::vector<Complex>> queries, std::span<const int> p_map);

struct SmallRangeStats {
    int k;
    int ell;
    int trials;
    double mean_overlap;
    double stderr_overlap;
    double bound;  // 1 - k^2 / ell
    std::uint64_t seed;
};

/// Monte Carlo over random P with uniform queries and Haar samples.
SmallRangeStats small_range_experiment(const SmallRangeParams& params, int payload_qubits, int trials, bool build_states,
                                       Rng& rng);

struct SrdReport {
    int k;
    std::uint64_t ell;
    std::uint64_t domain;
    int trials;
    double collision_full;
    double collision_small;
    double advantage;
    double stderr_advantage;
    double envelope;  // C_SRD k^3 / ell
    std::uint64_t seed;
};

/// Collision-finding distinguisher on k distinct classical queries, full
/// random table against the small-range oracle y_{P(x)}, 64-bit outputs.
SrdReport classical_srd_experiment(int k, std::uint64_t ell, std::uint64_t domain, int trials, Rng& rng,
                                   double c_srd = 1.0);

}  // namespace unclone
