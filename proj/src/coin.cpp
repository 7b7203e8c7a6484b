#include "unclone/coin.hpp"

#include <cmath>
#include <stdexcept>

#include "unclone/hash.hpp"

namespace unclone {

CoinVariant parse_coin_variant(std::string_view name) {
    if (name == "prs") return CoinVariant::kPrs;
    if (name == "eqsup") return CoinVariant::kEqsup;
    throw std::invalid_argument("unknown coin variant: " + std::string(name));
}

std::string_view to_string(CoinVariant v) { return v == CoinVariant::kPrs ? "prs" : "eqsup"; }

void CoinParams::validate() const {
    if (id_bits < 1 || id_bits > kCoinMaxIdBits) throw std::invalid_argument("coin: id bits must lie in [1, 6]");
    if (mini_n < 2 || mini_n > kCoinMaxMiniBits || mini_n % 2 != 0) {
        throw std::invalid_argument("coin: mini n must be even in [2, 10]");
    }
    sig.validate();
}

std::uint64_t coin_message(ByteView sn, int message_bits) {
    const std::uint8_t tag = static_cast<std::uint8_t>(HashTag::kCoinMessage);
    const Digest d = sha256({ByteView(&tag, 1), sn});
    std::uint64_t head = 0;
    for (int i = 0; i < 8; ++i) head = (head << 8) | d[i];
    return message_bits == 0 ? 0 : head >> (64 - message_bits);
}

std::pair<CoinVerifyKey, CoinSecretKey> coin_setup(const CoinParams& params, Rng& rng) {
    params.validate();
    auto [vk, sgk] = detsig_setup(params.sig, rng);
    PprfKey k = PprfKey::generate(params.id_bits, 256, rng);
    std::optional<PrsKey> prs;
    if (params.variant == CoinVariant::kPrs) prs = prs_setup(params.id_bits, rng);
    return {CoinVerifyKey{params, std::move(vk)}, CoinSecretKey{params, std::move(sgk), std::move(k), std::move(prs)}};
}

namespace {

std::vector<Complex> id_amplitudes(const CoinSecretKey& sk) {
    if (sk.params.variant == CoinVariant::kPrs) {
        if (!sk.prs) throw std::invalid_argument("coin: prs variant without a PRS key");
        return prs_amplitudes(*sk.prs);
    }
    const std::size_t d = std::size_t{1} << sk.params.id_bits;
    return std::vector<Complex>(d, Complex(1.0 / std::sqrt(static_cast<double>(d))));
}

}  // namespace

CoinBranchData coin_branch(const CoinSecretKey& sk, std::uint64_t id) {
    const auto amps = id_amplitudes(sk);
    if (id >= amps.size()) throw std::out_of_range("coin: id outside the id register");
    MiniBanknote note = mini_gen(sk.params.mini_n, sk.k.eval(id));
    Bytes sig = detsig_sign(sk.sgk, coin_message(note.sn, sk.params.sig.message_bits)).serialize();
    return {id, amps[id], std::move(note), std::move(sig)};
}

HybridState gen_banknote(const CoinSecretKey& sk) {
    const auto amps = id_amplitudes(sk);
    std::vector<HybridState::Term> terms;
    for (std::uint64_t x = 0; x < amps.size(); ++x) {
        CoinBranchData b = coin_branch(sk, x);
        terms.push_back({{encode_label_value(x, 1), b.note.sn, std::move(b.sig)}, b.amplitude, std::move(b.note.note)});
    }
    return HybridState(sk.params.mini_n, std::move(terms));
}

const Subspace* CoinVerifier::accepted_subspace(const Label& label) {
    if (label.size() != 3) throw DimensionError("coin verify: labels must be (id, sn, sig)");
    auto key = std::make_pair(label[kCoinSn], label[kCoinSig]);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        std::optional<Subspace> a;
        const auto& p = vk_.params;
        if (detsig_verify(vk_.vk, coin_message(label[kCoinSn], p.sig.message_bits), label[kCoinSig])) {
            a = Subspace::parse(label[kCoinSn]);
            if (a && a->n() != p.mini_n) a.reset();
        }
        it = cache_.emplace(std::move(key), std::move(a)).first;
    }
    return it->second ? &*it->second : nullptr;
}

std::vector<HybridState::Term> CoinVerifier::accepted_terms(const HybridState& candidate, double& probability) {
    if (candidate.payload_qubits() != vk_.params.mini_n) throw DimensionError("coin verify: note register has wrong width");
    std::vector<HybridState::Term> out;
    probability = 0.0;
    for (const auto& [label, b] : candidate.branches()) {
        const Subspace* a = accepted_subspace(label);
        if (!a) continue;
        Vector v = b.amplitude * mini_accept_branch(*a, b.payload.amplitudes());
        const double w = v.squaredNorm();
        if (w == 0.0) continue;
        probability += w;
        out.push_back({label, Complex(1.0), StateVector(vk_.params.mini_n, v / std::sqrt(w))});
        out.back().amplitude = std::sqrt(w);
    }
    return out;
}

double CoinVerifier::accept_probability(const HybridState& candidate) {
    double p = 0.0;
    accepted_terms(candidate, p);
    return p;
}

CoinVerifyOutcome CoinVerifier::verify(const HybridState& candidate, Rng& rng) {
    double p = 0.0;
    auto accepted = accepted_terms(candidate, p);
    bool bit;
    if (p >= 1.0 - kMinOutcomeProbability) {
        bit = true;
    } else if (p <= kMinOutcomeProbability) {
        bit = false;
    } else {
        bit = rng.bernoulli(p);
    }
    if (bit) {
        // Branch-wise the projector either keeps the branch or shrinks it; an
        // unchanged branch is returned as given.
        for (auto& t : accepted) {
            const Branch* orig = candidate.find(t.label);
            if (std::abs(std::norm(orig->amplitude) - std::norm(t.amplitude)) <= kMinOutcomeProbability &&
                fidelity(orig->payload, t.payload) >= 1.0 - kMinOutcomeProbability) {
                t.amplitude = orig->amplitude;
                t.payload = orig->payload;
            }
        }
        return {true, HybridState(vk_.params.mini_n, std::move(accepted), HybridState::Normalization::kRenormalize), p};
    }
    std::vector<HybridState::Term> rejected;
    for (const auto& [label, b] : candidate.branches()) {
        Vector v = b.amplitude * b.payload.amplitudes();
        if (const Subspace* a = accepted_subspace(label)) v -= mini_accept_branch(*a, v);
        const double w = v.norm();
        if (w < 1e-14) continue;
        rejected.push_back({label, Complex(w), StateVector(vk_.params.mini_n, v / w)});
    }
    return {false, HybridState(vk_.params.mini_n, std::move(rejected), HybridState::Normalization::kRenormalize), p};
}

CoinVerifyOutcome coin_verify(const CoinVerifyKey& vk, const HybridState& candidate, Rng& rng) {
    CoinVerifier v(vk);
    return v.verify(candidate, rng);
}

namespace {

HybridState junk_state(const CoinVerifyKey& vk) {
    return HybridState::product({encode_label_value(0, 1), Bytes{}, Bytes{}}, StateVector::basis(vk.params.mini_n, 0));
}

void need_coins(std::span<const HybridState> coins, std::string_view attack) {
    if (coins.empty()) throw std::invalid_argument(std::string(attack) + " attack needs at least one coin");
}

std::vector<HybridState> keep_all_but_last(std::span<const HybridState> coins) {
    return {coins.begin(), coins.end() - 1};
}

// Measures the last coin's labels and splits its note with a mini-scheme attack.
std::vector<HybridState> label_then_mini(std::span<const HybridState> coins, MiniAttack attack, Rng& rng) {
    auto out = keep_all_but_last(coins);
    const LabelMeasurement m = measure_labels(coins.back(), rng);
    auto [a, b] = mini_counterfeit(attack, m.payload, rng);
    out.push_back(HybridState::product(m.label, std::move(a)));
    out.push_back(HybridState::product(m.label, std::move(b)));
    return out;
}

}  // namespace

const std::vector<std::string>& coin_attack_names() {
    static const std::vector<std::string> names{"null", "zero-pad", "measure-clone", "hadamard-clone"};
    return names;
}

CoinAttack make_coin_attack(std::string_view name) {
    if (name == "null") {
        return [](const CoinVerifyKey& vk, std::span<const HybridState> coins, Rng&) {
            std::vector<HybridState> out(coins.begin(), coins.end());
            out.push_back(junk_state(vk));
            return out;
        };
    }
    if (name == "zero-pad") {
        return [](const CoinVerifyKey&, std::span<const HybridState> coins, Rng& rng) {
            need_coins(coins, "zero-pad");
            return label_then_mini(coins, MiniAttack::kZeroPad, rng);
        };
    }
    if (name == "measure-clone") {
        return [](const CoinVerifyKey&, std::span<const HybridState> coins, Rng& rng) {
            need_coins(coins, "measure-clone");
            return label_then_mini(coins, MiniAttack::kMeasureClone, rng);
        };
    }
    if (name == "hadamard-clone") {
        return [](const CoinVerifyKey&, std::span<const HybridState> coins, Rng& rng) {
            need_coins(coins, "hadamard-clone");
            return label_then_mini(coins, MiniAttack::kHadamardClone, rng);
        };
    }
    throw std::invalid_argument("unknown coin attack: " + std::string(name));
}

CounterfeitTrial counterfeit_game(CoinVerifier& verifier, const HybridState& coin, int t, const CoinAttack& attack,
                                  Rng& rng) {
    if (t < 0 || t > kCoinMaxIssued) throw std::invalid_argument("counterfeit: t must lie in [0, 4]");
    const std::vector<HybridState> coins(static_cast<std::size_t>(t), coin);
    Rng adv = rng.split(0);
    Rng chal = rng.split(1);
    const auto outputs = attack(verifier.key(), coins, adv);
    if (outputs.size() != static_cast<std::size_t>(t) + 1) {
        throw AttackArityError("counterfeit: attack must return t + 1 states");
    }
    CounterfeitTrial trial{true, {}};
    for (const auto& s : outputs) {
        const auto v = verifier.verify(s, chal);
        trial.accept_probabilities.push_back(v.accept_probability);
        trial.success = trial.success && v.bit;
    }
    return trial;
}

CounterfeitReport counterfeit_experiment(const CoinParams& params, int t, std::string_view attack_name, int trials,
                                         Rng& rng) {
    if (trials < 1) throw std::invalid_argument("counterfeit: need at least one trial");
    const CoinAttack attack = make_coin_attack(attack_name);
    Rng setup_rng = rng.split(0);
    auto [vk, sk] = coin_setup(params, setup_rng);
    const HybridState coin = gen_banknote(sk);
    CoinVerifier verifier(vk);
    int successes = 0;
    std::vector<double> mean(static_cast<std::size_t>(t) + 1, 0.0);
    for (int i = 0; i < trials; ++i) {
        Rng sub = rng.split(1).split(static_cast<std::uint64_t>(i));
        const auto trial = counterfeit_game(verifier, coin, t, attack, sub);
        successes += trial.success;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += trial.accept_probabilities[j] / trials;
    }
    const double rate = static_cast<double>(successes) / trials;
    const double half = std::ldexp(1.0, -params.mini_n / 2);
    double reference = -1.0;
    if (attack_name == "null") reference = 0.0;
    if (attack_name == "zero-pad") reference = half;
    if (attack_name == "measure-clone" || attack_name == "hadamard-clone") reference = half * half;
    return {params, t, std::string(attack_name), trials, successes, rate, std::sqrt(rate * (1 - rate) / trials), mean,
            reference, rng.seed()};
}

}  // namespace unclone
