#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "unclone/measurement.hpp"
#include "unclone/ue.hpp"

namespace unclone {

enum class GameName { kStrongAntiPiracy, kStrongSearch, kIdenticalChallenge, kMultiChallengeUe, kMultiCopyUe };

GameName parse_game_name(std::string_view name);
std::string_view to_string(GameName g);
bool is_ue_game(GameName g);

/// A decryptor is one register of the adversary's joint state together with,
/// for every input and candidate message, the projector onto the states on
/// which it outputs that message.
struct QuantumDecryptor {
    int qubits;
    std::function<Matrix(ByteView ct, ByteView message)> success;
};

struct SdeAdversaryOutput {
    StateVector state;  // registers in decryptor order
    std::vector<QuantumDecryptor> decryptors;
    std::vector<std::pair<Bytes, Bytes>> message_pairs;  // strong anti-piracy only
};

using SdeAdversary = std::function<SdeAdversaryOutput(const SdePublicKey&, std::span<const SdeSecretKey>, Rng&)>;

struct UeAdversaryOutput {
    StateVector state;
    std::vector<QuantumDecryptor> decryptors;  // inputs are UE decryption keys
};

using UeAdversary = std::function<UeAdversaryOutput(std::span<const UeCiphertext>, Rng&)>;

inline constexpr int kGameMaxQ = 3;
inline constexpr int kGameMaxRegisterQubits = 6;

struct GameConfig {
    GameName name = GameName::kStrongSearch;
    int q = 1;
    double gamma = 0.1;
    int test_samples = 2;  // encryptions per message in each test mixture
    SdeParams params;
    void validate() const;
};

class AdversaryArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GameReport {
    GameName name;
    int q;
    double gamma;
    bool outcome;
    std::vector<bool> bits;           // per decryptor: test passed or output correct
    std::vector<double> eigenvalues;  // sampled ProjImp outcome per test; empty for direct runs
    std::vector<std::string> transcript;
};

GameReport run_sde_game(const GameConfig& config, const SdeAdversary& adversary, Rng& rng);
GameReport run_ue_game(const GameConfig& config, const UeAdversary& adversary, Rng& rng);

/// |A><A| for the banknote behind a key, the honest decryptor's accepting subspace.
Matrix note_projector(ByteView sn);

QuantumDecryptor honest_sde_decryptor(const SdeSecretKey& sk);
QuantumDecryptor honest_ue_decryptor(const UeCiphertext& ct);
/// One qubit in |+>: outputs m0 or m1 with probability 1/2 each.
QuantumDecryptor pair_guesser(Bytes m0, Bytes m1);
/// message_bits qubits in uniform superposition, measured as the message.
QuantumDecryptor uniform_guesser(int message_bits);

/// "honest-forwarder", "perfect-copies" and "junk" for SDE games;
/// "perfect-copies" and "junk" for UE games.
SdeAdversary make_sde_adversary(std::string_view name, const GameConfig& config);
UeAdversary make_ue_adversary(std::string_view name, const GameConfig& config);
const std::vector<std::string>& adversary_names(GameName g);

struct GameStats {
    GameConfig config;
    std::string adversary;
    int trials;
    int successes;
    double rate;
    double stderr_rate;
    double reference;  // predicted rate, -1 when there is none
    std::vector<std::string> transcript;  // of the first trial
    std::uint64_t seed;
};

/// Trial i uses rng.split(i).
GameStats run_game_trials(const GameConfig& config, std::string_view adversary, int trials, Rng& rng);

}  // namespace unclone
