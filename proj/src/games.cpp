#include "unclone/games.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unclone {

GameName parse_game_name(std::string_view name) {
    if (name == "strong-anti-piracy") return GameName::kStrongAntiPiracy;
    if (name == "strong-search") return GameName::kStrongSearch;
    if (name == "identical-challenge") return GameName::kIdenticalChallenge;
    if (name == "multi-challenge-ue") return GameName::kMultiChallengeUe;
    if (name == "multi-copy-ue") return GameName::kMultiCopyUe;
    throw std::invalid_argument("unknown game: " + std::string(name));
}

std::string_view to_string(GameName g) {
    switch (g) {
        case GameName::kStrongAntiPiracy: return "strong-anti-piracy";
        case GameName::kStrongSearch: return "strong-search";
        case GameName::kIdenticalChallenge: return "identical-challenge";
        case GameName::kMultiChallengeUe: return "multi-challenge-ue";
        case GameName::kMultiCopyUe: return "multi-copy-ue";
    }
    throw std::logic_error("unreachable");
}

bool is_ue_game(GameName g) { return g == GameName::kMultiChallengeUe || g == GameName::kMultiCopyUe; }

void GameConfig::validate() const {
    params.validate();
    if (q < 1 || q > kGameMaxQ) throw std::invalid_argument("game: q must lie in [1, 3]");
    if (!(gamma > 0.0 && gamma <= 0.5)) throw std::invalid_argument("game: gamma must lie in (0, 1/2]");
    if (test_samples < 1) throw std::invalid_argument("game: need at least one test sample");
    if (params.message_bits() > kGameMaxRegisterQubits) throw std::invalid_argument("game: message space too large");
}

namespace {

std::string step(int n, const std::string& what) { return std::to_string(n) + " " + what; }

RegisterLayout layout_of(std::span<const QuantumDecryptor> ds, const StateVector& state) {
    std::vector<int> widths;
    int total = 0;
    for (const auto& d : ds) {
        if (d.qubits < 1 || d.qubits > kGameMaxRegisterQubits) throw DimensionError("game: decryptor register width");
        widths.push_back(d.qubits);
        total += d.qubits;
    }
    if (total != state.num_qubits()) throw DimensionError("game: joint state does not match the decryptor registers");
    return RegisterLayout(std::move(widths));
}

void check_arity(std::size_t got, int q) {
    if (got != static_cast<std::size_t>(q) + 1) throw AdversaryArityError("game: adversary must output q + 1 decryptors");
}

// Measures {P, I - P} on one register; returns the bit and collapses `state`.
bool measure_projector(const Matrix& p, StateVector& state, const RegisterLayout& layout, int reg, Rng& rng) {
    Vector yes = apply_on_register(state.amplitudes(), layout, reg, p);
    const double py = yes.squaredNorm();
    bool bit;
    if (py >= 1.0 - kMinOutcomeProbability) {
        bit = true;
    } else if (py <= kMinOutcomeProbability) {
        bit = false;
    } else {
        bit = rng.bernoulli(py);
    }
    Vector post = bit ? std::move(yes) : Vector(state.amplitudes() - yes);
    state = StateVector::normalized(state.num_qubits(), std::move(post));
    return bit;
}

void check_projector(const Matrix& p, int qubits) {
    if (p.rows() != (Eigen::Index{1} << qubits) || p.cols() != p.rows()) {
        throw DimensionError("game: decryptor projector has wrong size");
    }
}

}  // namespace

GameReport run_sde_game(const GameConfig& config, const SdeAdversary& adversary, Rng& rng) {
    config.validate();
    if (is_ue_game(config.name)) throw std::invalid_argument("run_sde_game: not an SDE game");
    const int q = config.q;
    GameReport rep{config.name, q, config.gamma, false, {}, {}, {}};
    auto& tr = rep.transcript;

    auto [pk, msk] = sde_setup(config.params, rng);
    tr.push_back(step(1, "setup; send pk"));
    std::vector<SdeSecretKey> keys;
    for (int i = 0; i < q; ++i) keys.push_back(sde_kg(msk, rng));
    tr.push_back(step(2, "keygen x" + std::to_string(q) + "; send keys"));
    Rng adv = rng.split(0x61);
    SdeAdversaryOutput out = adversary(pk, keys, adv);
    check_arity(out.decryptors.size(), q);
    const RegisterLayout layout = layout_of(out.decryptors, out.state);
    tr.push_back(step(3, "receive " + std::to_string(q + 1) + " decryptors"));

    const int mbits = config.params.message_bits();
    const std::size_t mbytes = config.params.one.message_bytes();
    StateVector state = out.state;

    if (config.name == GameName::kIdenticalChallenge) {
        const Bytes m = random_message(mbits, rng);
        const Bytes ct = sde_enc(pk, m, rng);
        tr.push_back(step(4, "sample m; encrypt once"));
        rep.outcome = true;
        for (int i = 0; i <= q; ++i) {
            const Matrix p = out.decryptors[i].success(ct, m);
            check_projector(p, out.decryptors[i].qubits);
            const bool b = measure_projector(p, state, layout, i, rng);
            rep.bits.push_back(b);
            rep.outcome = rep.outcome && b;
            tr.push_back(step(4, "run decryptor " + std::to_string(i + 1)));
        }
        tr.push_back("output " + std::to_string(rep.outcome));
        return rep;
    }

    const bool pairs = config.name == GameName::kStrongAntiPiracy;
    if (pairs) {
        check_arity(out.message_pairs.size(), q);
        for (const auto& [m0, m1] : out.message_pairs) {
            if (m0.size() != mbytes || m1.size() != mbytes) throw std::invalid_argument("game: message pair length");
        }
    }
    const double threshold = pairs ? 0.5 + config.gamma : std::ldexp(1.0, -mbits) + config.gamma;
    rep.outcome = true;
    for (int i = 0; i <= q; ++i) {
        const auto& d = out.decryptors[i];
        // Exact average over the coin (or the message); encryption randomness is sampled.
        std::vector<Bytes> messages;
        if (pairs) {
            messages = {out.message_pairs[i].first, out.message_pairs[i].second};
        } else {
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << mbits); ++v) messages.push_back(encode_message(v, mbits));
        }
        const double w = 1.0 / static_cast<double>(messages.size() * static_cast<std::size_t>(config.test_samples));
        std::vector<WeightedProjector> mix;
        Rng test = rng.split(0x100 + static_cast<std::uint64_t>(i));
        for (const auto& m : messages) {
            for (int s = 0; s < config.test_samples; ++s) {
                const Bytes ct = sde_enc(pk, m, test);
                Matrix p = d.success(ct, m);
                check_projector(p, d.qubits);
                mix.push_back({w, std::move(p)});
            }
        }
        const BinaryPovm povm = mixture_povm(mix);
        const auto res = threshold_measure_register(povm, threshold, state, layout, i, rng);
        state = res.post;
        rep.bits.push_back(res.bit);
        rep.eigenvalues.push_back(res.eigenvalue);
        rep.outcome = rep.outcome && res.bit;
        tr.push_back(step(4, "test decryptor " + std::to_string(i + 1)));
    }
    tr.push_back("output " + std::to_string(rep.outcome));
    return rep;
}

GameReport run_ue_game(const GameConfig& config, const UeAdversary& adversary, Rng& rng) {
    config.validate();
    if (!is_ue_game(config.name)) throw std::invalid_argument("run_ue_game: not a UE game");
    const int q = config.q;
    GameReport rep{config.name, q, config.gamma, false, {}, {}, {}};
    auto& tr = rep.transcript;
    const UeParams params{config.params};

    auto [ek, dk] = ue_kg(params, rng);
    tr.push_back(step(1, "keygen"));
    tr.push_back(step(2, "receive q=" + std::to_string(q)));
    const Bytes m = random_message(params.message_bits(), rng);
    std::vector<UeCiphertext> cts;
    if (config.name == GameName::kMultiCopyUe) {
        const Bytes r = rng.bytes(32);
        for (int i = 0; i < q; ++i) cts.push_back(ue_enc(ek, m, r));
        tr.push_back(step(3, "sample m; encrypt once; send " + std::to_string(q) + " copies"));
    } else {
        for (int i = 0; i < q; ++i) cts.push_back(ue_enc(ek, m, rng));
        tr.push_back(step(3, "sample m; encrypt x" + std::to_string(q) + "; send ciphertexts"));
    }
    Rng adv = rng.split(0x61);
    UeAdversaryOutput out = adversary(cts, adv);
    check_arity(out.decryptors.size(), q);
    const RegisterLayout layout = layout_of(out.decryptors, out.state);
    tr.push_back(step(4, "adversary splits into " + std::to_string(q + 1) + " registers"));

    StateVector state = out.state;
    rep.outcome = true;
    for (int i = 0; i <= q; ++i) {
        const Matrix p = out.decryptors[i].success(dk, m);
        check_projector(p, out.decryptors[i].qubits);
        const bool b = measure_projector(p, state, layout, i, rng);
        rep.bits.push_back(b);
        rep.outcome = rep.outcome && b;
        tr.push_back(step(5, "send dk; party " + std::to_string(i + 1) + " outputs"));
    }
    tr.push_back("output " + std::to_string(rep.outcome));
    return rep;
}

Matrix note_projector(ByteView sn) {
    const auto a = Subspace::parse(sn);
    if (!a) throw std::invalid_argument("note_projector: unparseable serial number");
    const StateVector s = subspace_state(*a);
    return s.amplitudes() * s.amplitudes().adjoint();
}

QuantumDecryptor honest_sde_decryptor(const SdeSecretKey& sk) {
    const int n = sk.one_sk.note.num_qubits();
    const Matrix proj = note_projector(sk.one_sk.sn);
    return {n, [sk, proj, n](ByteView ct, ByteView m) -> Matrix {
                const auto got = sde_dec(sk, ct);
                if (got && ByteView(*got).size() == m.size() && std::equal(got->begin(), got->end(), m.begin())) return proj;
                return Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
            }};
}

QuantumDecryptor honest_ue_decryptor(const UeCiphertext& ct) {
    const int n = ct.sk.one_sk.note.num_qubits();
    const Matrix proj = note_projector(ct.sk.one_sk.sn);
    return {n, [ct, proj, n](ByteView dk, ByteView m) -> Matrix {
                const auto got = ue_dec(Bytes(dk.begin(), dk.end()), ct);
                if (got && got->size() == m.size() && std::equal(got->begin(), got->end(), m.begin())) return proj;
                return Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
            }};
}

QuantumDecryptor pair_guesser(Bytes m0, Bytes m1) {
    return {1, [m0, m1](ByteView, ByteView m) -> Matrix {
                Matrix p = Matrix::Zero(2, 2);
                const Bytes mm(m.begin(), m.end());
                if (mm == m0) p(0, 0) = 1.0;
                if (mm == m1) p(1, 1) = 1.0;
                return p;
            }};
}

QuantumDecryptor uniform_guesser(int message_bits) {
    return {message_bits, [message_bits](ByteView, ByteView m) -> Matrix {
                const Eigen::Index d = Eigen::Index{1} << message_bits;
                Matrix p = Matrix::Zero(d, d);
                const std::uint64_t v = decode_message(m);
                if (v < static_cast<std::uint64_t>(d)) p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) = 1.0;
                return p;
            }};
}

namespace {

StateVector plus_state(int qubits) {
    const Eigen::Index d = Eigen::Index{1} << qubits;
    return StateVector(qubits, Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)))));
}

std::vector<std::pair<Bytes, Bytes>> default_pairs(const GameConfig& config) {
    const int b = config.params.message_bits();
    const std::uint64_t top = (b >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << b) - 1);
    return std::vector<std::pair<Bytes, Bytes>>(config.q + 1, {encode_message(0, b), encode_message(top, b)});
}

QuantumDecryptor guesser_for(const GameConfig& config) {
    if (config.name == GameName::kStrongAntiPiracy) {
        const auto p = default_pairs(config).front();
        return pair_guesser(p.first, p.second);
    }
    return uniform_guesser(config.params.message_bits());
}

StateVector guesser_state(const GameConfig& config) {
    return plus_state(config.name == GameName::kStrongAntiPiracy ? 1 : config.params.message_bits());
}

}  // namespace

const std::vector<std::string>& adversary_names(GameName g) {
    static const std::vector<std::string> sde{"honest-forwarder", "perfect-copies", "junk"};
    static const std::vector<std::string> ue{"perfect-copies", "junk"};
    return is_ue_game(g) ? ue : sde;
}

SdeAdversary make_sde_adversary(std::string_view name, const GameConfig& config) {
    if (name == "honest-forwarder") {
        return [config](const SdePublicKey&, std::span<const SdeSecretKey> keys, Rng&) {
            SdeAdversaryOutput out{StateVector::unit(), {}, default_pairs(config)};
            std::vector<StateVector> parts;
            for (const auto& k : keys) {
                out.decryptors.push_back(honest_sde_decryptor(k));
                parts.push_back(k.one_sk.note);
            }
            out.decryptors.push_back(guesser_for(config));
            parts.push_back(guesser_state(config));
            out.state = tensor(parts);
            return out;
        };
    }
    if (name == "perfect-copies") {
        return [config](const SdePublicKey&, std::span<const SdeSecretKey> keys, Rng&) {
            SdeAdversaryOutput out{StateVector::unit(), {}, default_pairs(config)};
            std::vector<StateVector> parts;
            for (int i = 0; i <= config.q; ++i) {
                out.decryptors.push_back(honest_sde_decryptor(keys.front()));
                parts.push_back(keys.front().one_sk.note);
            }
            out.state = tensor(parts);
            return out;
        };
    }
    if (name == "junk") {
        return [config](const SdePublicKey&, std::span<const SdeSecretKey>, Rng&) {
            SdeAdversaryOutput out{StateVector::unit(), {}, default_pairs(config)};
            std::vector<StateVector> parts;
            for (int i = 0; i <= config.q; ++i) {
                out.decryptors.push_back(guesser_for(config));
                parts.push_back(guesser_state(config));
            }
            out.state = tensor(parts);
            return out;
        };
    }
    throw std::invalid_argument("unknown SDE adversary: " + std::string(name));
}

UeAdversary make_ue_adversary(std::string_view name, const GameConfig& config) {
    if (name == "perfect-copies") {
        return [config](std::span<const UeCiphertext> cts, Rng&) {
            UeAdversaryOutput out{StateVector::unit(), {}};
            std::vector<StateVector> parts;
            for (int i = 0; i <= config.q; ++i) {
                out.decryptors.push_back(honest_ue_decryptor(cts.front()));
                parts.push_back(cts.front().sk.one_sk.note);
            }
            out.state = tensor(parts);
            return out;
        };
    }
    if (name == "junk") {
        return [config](std::span<const UeCiphertext>, Rng&) {
            UeAdversaryOutput out{StateVector::unit(), {}};
            std::vector<StateVector> parts;
            for (int i = 0; i <= config.q; ++i) {
                out.decryptors.push_back(uniform_guesser(config.params.message_bits()));
                parts.push_back(plus_state(config.params.message_bits()));
            }
            out.state = tensor(parts);
            return out;
        };
    }
    throw std::invalid_argument("unknown UE adversary: " + std::string(name));
}

namespace {

double reference_rate(const GameConfig& c, std::string_view adversary) {
    const double base = std::ldexp(1.0, -c.params.message_bits());
    if (adversary == "perfect-copies") return 1.0;
    const bool direct = c.name == GameName::kIdenticalChallenge || is_ue_game(c.name);
    if (adversary == "junk") return direct ? std::pow(base, c.q + 1) : 0.0;
    if (adversary == "honest-forwarder") return direct ? base : 0.0;
    return -1.0;
}

}  // namespace

GameStats run_game_trials(const GameConfig& config, std::string_view adversary, int trials, Rng& rng) {
    config.validate();
    if (trials < 1) throw std::invalid_argument("game: need at least one trial");
    const bool ue = is_ue_game(config.name);
    SdeAdversary sde_adv;
    UeAdversary ue_adv;
    if (ue) {
        ue_adv = make_ue_adversary(adversary, config);
    } else {
        sde_adv = make_sde_adversary(adversary, config);
    }
    GameStats st{config, std::string(adversary), trials, 0, 0.0, 0.0, reference_rate(config, adversary), {}, rng.seed()};
    for (int i = 0; i < trials; ++i) {
        Rng sub = rng.split(static_cast<std::uint64_t>(i));
        const GameReport r = ue ? run_ue_game(config, ue_adv, sub) : run_sde_game(config, sde_adv, sub);
        st.successes += r.outcome;
        if (i == 0) st.transcript = r.transcript;
    }
    st.rate = static_cast<double>(st.successes) / trials;
    st.stderr_rate = std::sqrt(st.rate * (1 - st.rate) / trials);
    return st;
}

}  // namespace unclone
