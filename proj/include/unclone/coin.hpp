#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unclone/detsig.hpp"
#include "unclone/hybrid.hpp"
#include "unclone/minischeme.hpp"
#include "unclone/pprf.hpp"
#include "unclone/prs.hpp"

namespace unclone {

/// kPrs: id register carries PRS amplitudes. kEqsup: uniform over 2^id_bits ids.
enum class CoinVariant { kPrs, kEqsup };

CoinVariant parse_coin_variant(std::string_view name);
std::string_view to_string(CoinVariant v);

inline constexpr int kCoinMaxIdBits = 6;
inline constexpr int kCoinMaxMiniBits = 10;

struct CoinParams {
    CoinVariant variant = CoinVariant::kEqsup;
    int id_bits = 4;  // PRS qubits, or nu for the equal-superposition coin
    int mini_n = 8;
    DetsigParams sig;
    void validate() const;
};

struct CoinVerifyKey {
    CoinParams params;
    DetsigVerifyKey vk;
};

struct CoinSecretKey {
    CoinParams params;
    DetsigSecretKey sgk;
    PprfKey k;                   // id -> mini-scheme randomness
    std::optional<PrsKey> prs;   // absent for kEqsup
};

/// Register order of every coin branch label.
enum CoinRegister : std::size_t { kCoinId = 0, kCoinSn = 1, kCoinSig = 2 };

/// Message signed for serial number sn: the leading message_bits bits of
/// SHA-256(0x04 || sn).
std::uint64_t coin_message(ByteView sn, int message_bits);

std::pair<CoinVerifyKey, CoinSecretKey> coin_setup(const CoinParams& params, Rng& rng);

struct CoinBranchData {
    std::uint64_t id;
    Complex amplitude;
    MiniBanknote note;
    Bytes sig;
};

/// Classical recomputation of one branch from the secret key.
CoinBranchData coin_branch(const CoinSecretKey& sk, std::uint64_t id);

/// The fixed pure state sum_x a_x |x, sn_x, sig_x> |$_x>.
HybridState gen_banknote(const CoinSecretKey& sk);

struct CoinVerifyOutcome {
    bool bit;
    HybridState post;
    double accept_probability;
};

/// Coherent verification as an exact projector. Signature checks are pure, so
/// results are cached per (sn, sig) and a verifier may be reused across
/// candidates under the same key.
class CoinVerifier {
public:
    explicit CoinVerifier(CoinVerifyKey vk) : vk_(std::move(vk)) {}

    const CoinVerifyKey& key() const { return vk_; }
    CoinVerifyOutcome verify(const HybridState& candidate, Rng& rng);
    double accept_probability(const HybridState& candidate);
    /// Classical part of the check for one label; null when it fails.
    const Subspace* accepted_subspace(const Label& label);

private:
    std::vector<HybridState::Term> accepted_terms(const HybridState& candidate, double& probability);

    CoinVerifyKey vk_;
    std::map<std::pair<Bytes, Bytes>, std::optional<Subspace>> cache_;
};

CoinVerifyOutcome coin_verify(const CoinVerifyKey& vk, const HybridState& candidate, Rng& rng);

/// Receives the issued coins and must return t + 1 candidates.
using CoinAttack =
    std::function<std::vector<HybridState>(const CoinVerifyKey&, std::span<const HybridState> coins, Rng&)>;

/// "null", "zero-pad", "measure-clone", "hadamard-clone".
CoinAttack make_coin_attack(std::string_view name);
const std::vector<std::string>& coin_attack_names();

struct CounterfeitTrial {
    bool success;
    std::vector<double> accept_probabilities;
};

class AttackArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Hands t copies of `coin` to the attack and verifies all t + 1 outputs.
CounterfeitTrial counterfeit_game(CoinVerifier& verifier, const HybridState& coin, int t, const CoinAttack& attack,
                                  Rng& rng);

struct CounterfeitReport {
    CoinParams params;
    int t;
    std::string attack;
    int trials;
    int successes;
    double success_rate;
    double stderr_rate;
    std::vector<double> mean_accept;  // per output slot
    double reference;                 // predicted success rate for the attack, -1 if none
    std::uint64_t seed;
};

/// One bank setup and one banknote shared by every trial; trial i uses rng.split(i).
CounterfeitReport counterfeit_experiment(const CoinParams& params, int t, std::string_view attack, int trials, Rng& rng);

inline constexpr int kCoinMaxIssued = 4;

}  // namespace unclone
