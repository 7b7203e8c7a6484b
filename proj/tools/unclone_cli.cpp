#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unclone/coin.hpp"
#include "unclone/detsig.hpp"
#include "unclone/games.hpp"
#include "unclone/minischeme.hpp"
#include "unclone/pprf.hpp"
#include "unclone/prs.hpp"
#include "unclone/purify.hpp"
#include "unclone/sde.hpp"
#include "unclone/ue.hpp"

using json = nlohmann::ordered_json;
using namespace unclone;

namespace {

constexpr int kReportSchema = 1;
constexpr int kExitThreshold = 2;
constexpr int kExitUsage = 1;

struct Report {
    std::string experiment;
    json config = json::object();
    json results = json::object();
    bool passed = true;
};

double binomial_sigma(double p, int trials) { return std::sqrt(p * (1.0 - p) / trials); }

std::uint64_t message_from_hex(const std::string& hex, int bits) {
    const Bytes b = from_hex(hex);
    if (b.size() > 8) throw std::invalid_argument("message wider than 64 bits");
    std::uint64_t m = 0;
    for (auto x : b) m = (m << 8) | x;
    if (bits < 64 && (m >> bits) != 0) throw std::invalid_argument("message does not fit in n bits");
    return m;
}

// ---- detsig ---------------------------------------------------------------

struct DetsigOpts {
    int n = 8;
    int digest_bits = kOtsDefaultDigestBits;
    std::uint64_t seed = 0;
    int messages = 2;
    std::string message;
    std::string signature;
    std::string vk;
};

DetsigParams detsig_params(const DetsigOpts& o) {
    DetsigParams p;
    p.message_bits = o.n;
    p.digest_bits = o.digest_bits;
    p.validate();
    return p;
}

void detsig_config(Report& r, const DetsigOpts& o) {
    r.config["n"] = o.n;
    r.config["digest_bits"] = o.digest_bits;
}

Report run_detsig_vectors(const DetsigOpts& o) {
    Report r{"detsig vectors"};
    detsig_config(r, o);
    r.config["messages"] = o.messages;
    const auto params = detsig_params(o);
    Rng rng(o.seed);
    auto [vk, sk] = detsig_setup(params, rng);
    r.results["vk"] = to_hex(vk.serialize());
    r.results["signature_bytes"] = detsig_signature_size(params);
    Rng pick = rng.split(1);
    json vectors = json::array();
    bool all_ok = true;
    for (int i = 0; i < o.messages; ++i) {
        const std::uint64_t m = params.message_bits == 64 ? pick.next_u64() : pick.below(std::uint64_t{1} << params.message_bits);
        const Bytes sig = detsig_sign(sk, m).serialize();
        const bool ok = detsig_verify(vk, m, sig);
        all_ok = all_ok && ok;
        vectors.push_back({{"message", m}, {"signature", to_hex(sig)}, {"verifies", ok}});
    }
    r.results["vectors"] = vectors;
    r.passed = all_ok;
    return r;
}

Report run_detsig_sign(const DetsigOpts& o) {
    Report r{"detsig sign"};
    detsig_config(r, o);
    r.config["message"] = o.message;
    const auto params = detsig_params(o);
    Rng rng(o.seed);
    auto [vk, sk] = detsig_setup(params, rng);
    const std::uint64_t m = message_from_hex(o.message, params.message_bits);
    r.results["vk"] = to_hex(vk.serialize());
    r.results["signature"] = to_hex(detsig_sign(sk, m).serialize());
    return r;
}

Report run_detsig_verify(const DetsigOpts& o) {
    Report r{"detsig verify"};
    detsig_config(r, o);
    r.config["message"] = o.message;
    const auto params = detsig_params(o);
    DetsigVerifyKey vk{params, {params.digest_bits, {}}};
    if (o.vk.empty()) {
        Rng rng(o.seed);
        vk = detsig_setup(params, rng).first;
    } else {
        vk.vk_root.data = from_hex(o.vk);
        if (vk.vk_root.data.size() != ots_vk_size(params.digest_bits)) throw std::invalid_argument("vk has wrong length");
    }
    const bool ok = detsig_verify(vk, message_from_hex(o.message, params.message_bits), from_hex(o.signature));
    r.results["valid"] = ok;
    r.passed = ok;
    return r;
}

// ---- coin and mini ----------------------------------------------------------

struct CoinOpts {
    std::string variant = "eqsup";
    int id_bits = 4;
    int mini_n = 8;
    int digest_bits = kOtsDefaultDigestBits;
    std::string attack = "zero-pad";
    int t = 1;
    int trials = 1000;
    std::uint64_t seed = 0;
};

Report run_coin_demo(const CoinOpts& o) {
    Report r{"coin demo"};
    r.config = {{"variant", o.variant}, {"id_bits", o.id_bits}, {"mini_n", o.mini_n}, {"digest_bits", o.digest_bits},
                {"attack", o.attack},   {"t", o.t},             {"trials", o.trials}};
    CoinParams params;
    params.variant = parse_coin_variant(o.variant);
    params.id_bits = o.id_bits;
    params.mini_n = o.mini_n;
    params.sig.digest_bits = o.digest_bits;
    Rng rng(o.seed);
    const auto rep = counterfeit_experiment(params, o.t, o.attack, o.trials, rng);
    r.results["successes"] = rep.successes;
    r.results["success_rate"] = rep.success_rate;
    r.results["stderr"] = rep.stderr_rate;
    r.results["mean_accept"] = rep.mean_accept;
    r.results["reference"] = rep.reference;
    if (rep.reference >= 0.0) {
        // Envelope: the attack may not beat its predicted rate by more than 3 sigma.
        const double envelope = rep.reference + 3.0 * binomial_sigma(rep.reference, o.trials);
        r.results["envelope"] = envelope;
        r.passed = rep.success_rate <= envelope;
    }
    return r;
}

struct MiniOpts {
    int n = 8;
    std::string attack = "measure-clone";
    int trials = 1000;
    std::uint64_t seed = 0;
};

Report run_mini_demo(const MiniOpts& o) {
    Report r{"mini demo"};
    r.config = {{"n", o.n}, {"attack", o.attack}, {"trials", o.trials}};
    if (o.trials < 1) throw std::invalid_argument("trials must be positive");
    const MiniAttack attack = parse_mini_attack(o.attack);
    int honest = 0;
    int successes = 0;
    for (int i = 0; i < o.trials; ++i) {
        Rng sub = Rng(o.seed).split(static_cast<std::uint64_t>(i));
        const Bytes randomness = sub.bytes(32);
        const MiniBanknote bn = mini_gen(o.n, randomness);
        Rng play = sub.split(0);
        honest += mini_verify(bn.sn, bn.note, play).bit;
        const auto [a, b] = mini_counterfeit(attack, bn.note, play);
        successes += mini_verify(bn.sn, a, play).bit && mini_verify(bn.sn, b, play).bit;
    }
    const double half = std::ldexp(1.0, -o.n / 2);
    const double reference = attack == MiniAttack::kZeroPad ? half : half * half;
    const double rate = static_cast<double>(successes) / o.trials;
    r.results["honest_accept_rate"] = static_cast<double>(honest) / o.trials;
    r.results["successes"] = successes;
    r.results["success_rate"] = rate;
    r.results["stderr"] = binomial_sigma(rate, o.trials);
    r.results["reference"] = reference;
    const double envelope = reference + 3.0 * binomial_sigma(reference, o.trials);
    r.results["envelope"] = envelope;
    r.passed = honest == o.trials && rate <= envelope;
    return r;
}

// ---- purify -----------------------------------------------------------------

struct PurifyOpts {
    int n = 4;
    int t = 2;
    int haar_samples = 0;
    int configs = 50;
    int payload_qubits = 1;
    int k = 2;
    int ell = 32;
    int domain_bits = 6;
    std::uint64_t domain = 1 << 20;
    int trials = 1000;
    bool explicit_states = false;
    std::uint64_t seed = 0;
};

Report run_lemma31(const PurifyOpts& o) {
    Report r{"purify lemma31"};
    r.config = {{"n", o.n}, {"t", o.t}, {"haar_samples", o.haar_samples}};
    Rng rng(o.seed);
    const auto rep = type_vs_haar_distance(o.n, o.t, o.haar_samples, rng);
    r.results["td_estimate"] = rep.td_exact;
    r.results["bound"] = rep.bound;
    if (rep.td_monte_carlo) r.results["td_monte_carlo"] = *rep.td_monte_carlo;
    r.passed = rep.td_exact <= rep.bound;
    return r;
}

// A generator whose output depends on every randomness bit: amplitudes drawn
// from an expansion of (z, r).
GenStateSpec demo_generator(int payload_qubits) {
    GenStateSpec spec;
    spec.z = {0x7a};
    spec.randomness_bits = 64;
    spec.payload_qubits = payload_qubits;
    spec.generator = [payload_qubits](ByteView z, ByteView rnd) {
        const Bytes raw = expand(HashTag::kExpand, concat({z, rnd}), std::size_t{4} << payload_qubits);
        Vector v(Eigen::Index{1} << payload_qubits);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const auto re = static_cast<double>(raw[4 * i]) + raw[4 * i + 1] / 256.0 - 127.5;
            const auto im = static_cast<double>(raw[4 * i + 2]) + raw[4 * i + 3] / 256.0 - 127.5;
            v[i] = Complex(re, im);
        }
        return StateVector::normalized(payload_qubits, std::move(v));
    };
    return spec;
}

Report run_compiler(const PurifyOpts& o) {
    Report r{"purify compiler"};
    r.config = {{"n_max", o.n}, {"t_max", o.t}, {"configs", o.configs}, {"payload_qubits", o.payload_qubits}};
    if (o.n < 1 || o.t < 1 || o.configs < 1) throw std::invalid_argument("n, t and configs must be positive");
    const auto spec = demo_generator(o.payload_qubits);
    Rng rng(o.seed);
    double worst = 0.0;
    json rows = json::array();
    for (int i = 0; i < o.configs; ++i) {
        Rng sub = rng.split(static_cast<std::uint64_t>(i));
        const int n = 1 + static_cast<int>(sub.below(static_cast<std::uint64_t>(o.n)));
        const int t = 1 + static_cast<int>(sub.below(static_cast<std::uint64_t>(std::min(o.t, 1 << n))));
        const auto rep = compiler_equivalence_check(spec, n, t, sub);
        worst = std::max(worst, rep.exact_gap);
        rows.push_back({{"n", n}, {"t", t}, {"exact_gap", rep.exact_gap}});
    }
    r.results["max_exact_gap"] = worst;
    r.results["threshold"] = 1e-9;
    r.results["configs"] = rows;
    r.passed = worst <= 1e-9;
    return r;
}

Report run_small_range(const PurifyOpts& o) {
    Report r{"purify small-range"};
    r.config = {{"k", o.k},         {"ell", o.ell},       {"domain_bits", o.domain_bits}, {"payload_qubits", o.payload_qubits},
                {"trials", o.trials}, {"explicit", o.explicit_states}};
    SmallRangeParams p;
    p.k = o.k;
    p.ell = o.ell;
    p.domain_bits = o.domain_bits;
    Rng rng(o.seed);
    const auto st = small_range_experiment(p, o.payload_qubits, o.trials, o.explicit_states, rng);
    r.results["mean_overlap"] = st.mean_overlap;
    r.results["stderr"] = st.stderr_overlap;
    r.results["bound"] = st.bound;
    r.passed = st.mean_overlap >= st.bound - 3.0 * st.stderr_overlap;
    return r;
}

Report run_srd(const PurifyOpts& o) {
    Report r{"purify srd"};
    r.config = {{"k", o.k}, {"ell", o.ell}, {"domain", o.domain}, {"trials", o.trials}};
    Rng rng(o.seed);
    const auto rep = classical_srd_experiment(o.k, static_cast<std::uint64_t>(o.ell), o.domain, o.trials, rng);
    r.results["collision_full"] = rep.collision_full;
    r.results["collision_small"] = rep.collision_small;
    r.results["advantage"] = rep.advantage;
    r.results["stderr"] = rep.stderr_advantage;
    r.results["envelope"] = rep.envelope;
    r.passed = rep.advantage <= rep.envelope + 3.0 * rep.stderr_advantage;
    return r;
}

// ---- prs --------------------------------------------------------------------

struct PrsOpts {
    int n = 6;
    int keys = 20;
    std::uint64_t seed = 0;
};

Report run_prs_demo(const PrsOpts& o) {
    Report r{"prs demo"};
    r.config = {{"n", o.n}, {"keys", o.keys}};
    if (o.keys < 2) throw std::invalid_argument("need at least two keys");
    Rng rng(o.seed);
    std::vector<StateVector> states;
    for (int i = 0; i < o.keys; ++i) {
        Rng sub = rng.split(static_cast<std::uint64_t>(i));
        states.push_back(prs_state(prs_setup(o.n, sub)));
    }
    double sum = 0.0;
    double sum2 = 0.0;
    int pairs = 0;
    for (int i = 0; i < o.keys; ++i) {
        for (int j = i + 1; j < o.keys; ++j) {
            const double f = fidelity(states[i], states[j]);
            sum += f;
            sum2 += f * f;
            ++pairs;
        }
    }
    const double mean = sum / pairs;
    const double var = std::max(0.0, sum2 / pairs - mean * mean);
    r.results["pairs"] = pairs;
    r.results["mean_overlap"] = mean;
    r.results["stderr"] = std::sqrt(var / pairs);
    r.results["haar_reference"] = std::ldexp(1.0, -o.n);
    return r;
}

// ---- sde, ue, games -----------------------------------------------------------

struct WiringOpts {
    int message_bits = 4;
    int note_qubits = 4;
    int keys = 5;
    int trials = 100;
    std::uint64_t seed = 0;
};

SdeParams sde_params(const WiringOpts& o) {
    SdeParams p;
    p.one.message_bits = o.message_bits;
    p.one.note_qubits = o.note_qubits;
    p.validate();
    return p;
}

Report run_sde_demo(const WiringOpts& o) {
    Report r{"sde demo"};
    r.config = {{"message_bits", o.message_bits}, {"note_qubits", o.note_qubits}, {"keys", o.keys}};
    if (o.message_bits > 8) throw std::invalid_argument("sde demo enumerates messages; use at most 8 bits");
    const auto params = sde_params(o);
    Rng rng(o.seed);
    auto [pk, msk] = sde_setup(params, rng);
    std::vector<SdeSecretKey> keys;
    for (int i = 0; i < o.keys; ++i) keys.push_back(sde_kg(msk, rng));
    std::set<Bytes> tags;
    for (const auto& k : keys) tags.emplace(k.one_pk.tag().begin(), k.one_pk.tag().end());
    int ok = 0;
    int total = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << o.message_bits); ++m) {
        const Bytes ct = sde_enc(pk, m, rng);
        for (const auto& k : keys) {
            const auto out = sde_dec(k, ct);
            ok += out && decode_message(*out) == m;
            ++total;
        }
    }
    r.results["round_trips"] = total;
    r.results["correct"] = ok;
    r.results["distinct_tags"] = tags.size();
    r.results["ciphertext_bytes"] = params.ct_bytes();
    r.passed = ok == total && static_cast<int>(tags.size()) == o.keys;
    return r;
}

Report run_ue_demo(const WiringOpts& o) {
    Report r{"ue demo"};
    r.config = {{"message_bits", o.message_bits}, {"note_qubits", o.note_qubits}, {"trials", o.trials}};
    const UeParams params{sde_params(o)};
    Rng rng(o.seed);
    int ue_ok = 0;
    int prime_ok = 0;
    int determined = 0;
    for (int i = 0; i < o.trials; ++i) {
        Rng sub = rng.split(static_cast<std::uint64_t>(i));
        auto [ek, dk] = ue_kg(params, sub);
        const Bytes m = random_message(params.message_bits(), sub);
        const Bytes randomness = sub.bytes(32);
        const auto ct = ue_enc(ek, m, randomness);
        ue_ok += ue_dec(dk, ct) == m;
        determined += identical(ct, ue_enc(ek, m, randomness));
        const Bytes s = ue_prime_kg(params, sub);
        prime_ok += ue_prime_dec(s, ue_prime_enc(params, s, m, sub)) == m;
    }
    r.results["ue_round_trips"] = ue_ok;
    r.results["appendix_round_trips"] = prime_ok;
    r.results["classically_determined"] = determined;
    r.passed = ue_ok == o.trials && prime_ok == o.trials && determined == o.trials;
    return r;
}

struct GameOpts {
    std::string name = "strong-search";
    std::string adversary = "perfect-copies";
    int q = 1;
    double gamma = 0.1;
    int trials = 20;
    int test_samples = 2;
    int message_bits = 2;
    int note_qubits = 2;
    std::uint64_t seed = 0;
};

Report run_game(const GameOpts& o) {
    Report r{"game run"};
    r.config = {{"name", o.name},     {"adversary", o.adversary},       {"q", o.q},
                {"gamma", o.gamma},   {"trials", o.trials},             {"test_samples", o.test_samples},
                {"message_bits", o.message_bits}, {"note_qubits", o.note_qubits}};
    GameConfig cfg;
    cfg.name = parse_game_name(o.name);
    cfg.q = o.q;
    cfg.gamma = o.gamma;
    cfg.test_samples = o.test_samples;
    cfg.params.one.message_bits = o.message_bits;
    cfg.params.one.note_qubits = o.note_qubits;
    Rng rng(o.seed);
    const auto st = run_game_trials(cfg, o.adversary, o.trials, rng);
    r.results["successes"] = st.successes;
    r.results["rate"] = st.rate;
    r.results["stderr"] = st.stderr_rate;
    r.results["reference"] = st.reference;
    r.results["transcript"] = st.transcript;
    if (st.reference >= 0.0) {
        const double tol = 3.0 * binomial_sigma(st.reference, o.trials);
        r.results["tolerance"] = tol;
        r.passed = std::abs(st.rate - st.reference) <= tol;
    }
    return r;
}

// ---- golden vectors -----------------------------------------------------------

Report run_vectors(std::uint64_t seed) {
    Report r{"vectors"};
    Rng rng(seed);
    json out = json::object();

    Rng pr = rng.split(0);
    const auto key = PprfKey::generate(8, 128, pr);
    json evals = json::array();
    for (std::uint64_t x : {0u, 1u, 77u, 255u}) evals.push_back({{"x", x}, {"y", to_hex(key.eval(x))}});
    const auto punct = puncture(key, {3, 77, 200});
    out["pprf"] = {{"key", to_hex(key.serialize())}, {"evals", evals}, {"punctured", to_hex(punct.serialize())}};

    Rng orng = rng.split(1);
    const Bytes seed_bytes = orng.bytes(32);
    const auto kp = ots_keygen(seed_bytes, 8);
    const Bytes msg = {'u', 'n', 'c', 'l', 'o', 'n', 'e'};
    out["ots"] = {{"seed", to_hex(seed_bytes)}, {"digest_bits", 8}, {"message", to_hex(msg)},
                  {"vk", to_hex(kp.vk.data)},   {"signature", to_hex(ots_sign(kp.sk, msg))}};

    Rng mrng = rng.split(2);
    const Bytes mini_r = mrng.bytes(32);
    const auto bn = mini_gen(8, mini_r);
    out["mini"] = {{"n", 8}, {"randomness", to_hex(mini_r)}, {"sn", to_hex(bn.sn)}};

    Rng krng = rng.split(3);
    const auto kw = KwiseFunction::generate(2, 6, 1, krng);
    json kv = json::array();
    for (std::uint32_t x = 0; x < 8; ++x) kv.push_back(kw.field_eval(x));
    out["kwise"] = {{"k", 2}, {"m", 6}, {"coefficients", kw.coefficients()}, {"field_evals", kv}};

    out["coin_message"] = {{"sn", to_hex(bn.sn)}, {"bits", 16}, {"message", coin_message(bn.sn, 16)}};
    r.results = out;
    return r;
}

// ---- report plumbing ----------------------------------------------------------

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
    } else {
        rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

std::string render(const json& doc, const std::string& format) {
    if (format == "json") return doc.dump(2) + "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(doc, "", rows);
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << k << "," << v << "\n";
    return os.str();
}

// Options from a key=value file are appended unless the same flag was given
// on the command line.
std::vector<std::string> merge_config_file(std::vector<std::string> args, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::set<std::string> given;
    for (const auto& a : args) {
        if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string flag = "--" + trim(line.substr(0, eq));
        if (given.count(flag)) continue;
        args.push_back(flag);
        args.push_back(trim(line.substr(eq + 1)));
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            continue;
        }
        try {
            args = merge_config_file(std::move(args), path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        break;
    }

    CLI::App app{"Simulation harness for unclonable cryptography constructions", "unclone"};
    app.set_version_flag("--version", std::string(UNCLONE_VERSION));
    app.require_subcommand(1);
    std::string output;
    std::string format = "json";
    app.add_option("--output,-o", output, "Write the report here instead of stdout");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", "key=value file with default flag values (handled before parsing)");

    std::function<Report()> job;
    std::uint64_t seed = 0;
    auto seed_opt = [&seed](CLI::App* sub) { sub->add_option("--seed", seed, "PRNG seed")->required(); };

    // detsig
    DetsigOpts dso;
    auto* detsig = app.add_subcommand("detsig", "Deterministic tree signatures")->require_subcommand(1);
    auto detsig_common = [&](CLI::App* sub) {
        sub->add_option("--n", dso.n, "Message bits")->capture_default_str();
        sub->add_option("--digest-bits", dso.digest_bits, "One-time signature digest length L")->capture_default_str();
        seed_opt(sub);
    };
    auto* dv = detsig->add_subcommand("vectors", "Emit golden signatures");
    detsig_common(dv);
    dv->add_option("--messages", dso.messages, "Number of signed messages")->capture_default_str();
    dv->callback([&] { job = [&] { dso.seed = seed; return run_detsig_vectors(dso); }; });
    auto* ds = detsig->add_subcommand("sign", "Sign a hex-encoded message with keys derived from the seed");
    detsig_common(ds);
    ds->add_option("--message", dso.message, "Message as big-endian hex")->required();
    ds->callback([&] { job = [&] { dso.seed = seed; return run_detsig_sign(dso); }; });
    auto* dver = detsig->add_subcommand("verify", "Verify a hex-encoded signature");
    detsig_common(dver);
    dver->add_option("--message", dso.message, "Message as big-endian hex")->required();
    dver->add_option("--signature", dso.signature, "Signature as hex")->required();
    dver->add_option("--vk", dso.vk, "Verification key as hex; derived from the seed when absent");
    dver->callback([&] { job = [&] { dso.seed = seed; return run_detsig_verify(dso); }; });

    // coin
    CoinOpts co;
    auto* coin = app.add_subcommand("coin", "Quantum coins")->require_subcommand(1);
    auto* cd = coin->add_subcommand("demo", "Counterfeiting experiment against one issued coin");
    cd->add_option("--variant", co.variant)->check(CLI::IsMember({"prs", "eqsup"}))->capture_default_str();
    cd->add_option("--id-bits", co.id_bits)->capture_default_str();
    cd->add_option("--mini-n", co.mini_n)->capture_default_str();
    cd->add_option("--digest-bits", co.digest_bits)->capture_default_str();
    cd->add_option("--attack", co.attack)->check(CLI::IsMember(coin_attack_names()))->capture_default_str();
    cd->add_option("--t", co.t, "Coins handed to the attacker")->capture_default_str();
    cd->add_option("--trials", co.trials)->capture_default_str();
    seed_opt(cd);
    cd->callback([&] { job = [&] { co.seed = seed; return run_coin_demo(co); }; });

    // mini
    MiniOpts mo;
    auto* mini = app.add_subcommand("mini", "Subspace-state mini-scheme")->require_subcommand(1);
    auto* md = mini->add_subcommand("demo", "Honest verification and one counterfeiting attack");
    md->add_option("--n", mo.n)->capture_default_str();
    md->add_option("--attack", mo.attack)->check(CLI::IsMember({"measure-clone", "zero-pad", "hadamard-clone"}))->capture_default_str();
    md->add_option("--trials", mo.trials)->capture_default_str();
    seed_opt(md);
    md->callback([&] { job = [&] { mo.seed = seed; return run_mini_demo(mo); }; });

    // purify
    PurifyOpts po;
    auto* purify = app.add_subcommand("purify", "Purification compiler experiments")->require_subcommand(1);
    auto* pl = purify->add_subcommand("lemma31", "Distinct-type average against the Haar t-copy average");
    pl->add_option("--n", po.n)->capture_default_str();
    pl->add_option("--t", po.t)->capture_default_str();
    pl->add_option("--haar-samples", po.haar_samples)->capture_default_str();
    seed_opt(pl);
    pl->callback([&] { job = [&] { po.seed = seed; return run_lemma31(po); }; });
    auto* pc = purify->add_subcommand("compiler", "Type-state route against the simulator route");
    pc->add_option("--n", po.n, "Largest n")->capture_default_str();
    pc->add_option("--t", po.t, "Largest t")->capture_default_str();
    pc->add_option("--configs", po.configs)->capture_default_str();
    pc->add_option("--payload-qubits", po.payload_qubits)->capture_default_str();
    seed_opt(pc);
    pc->callback([&] { job = [&] { po.seed = seed; return run_compiler(po); }; });
    auto* ps = purify->add_subcommand("small-range", "Overlap of the k-query state with its distinct-bucket part");
    ps->add_option("--k", po.k)->capture_default_str();
    ps->add_option("--ell", po.ell)->capture_default_str();
    ps->add_option("--domain-bits", po.domain_bits)->capture_default_str();
    ps->add_option("--payload-qubits", po.payload_qubits)->capture_default_str();
    ps->add_option("--trials", po.trials)->capture_default_str();
    ps->add_flag("--explicit", po.explicit_states, "Build the states instead of using bucket weights");
    seed_opt(ps);
    ps->callback([&] { job = [&] { po.seed = seed; return run_small_range(po); }; });
    auto* pd = purify->add_subcommand("srd", "Classical small-range distinguisher");
    pd->add_option("--k", po.k)->capture_default_str();
    pd->add_option("--ell", po.ell)->capture_default_str();
    pd->add_option("--domain", po.domain)->capture_default_str();
    pd->add_option("--trials", po.trials)->capture_default_str();
    seed_opt(pd);
    pd->callback([&] { job = [&] { po.seed = seed; return run_srd(po); }; });

    // prs
    PrsOpts pro;
    auto* prs = app.add_subcommand("prs", "Binary-phase pseudorandom states")->require_subcommand(1);
    auto* prd = prs->add_subcommand("demo", "Pairwise overlaps across keys");
    prd->add_option("--n", pro.n)->capture_default_str();
    prd->add_option("--keys", pro.keys)->capture_default_str();
    seed_opt(prd);
    prd->callback([&] { job = [&] { pro.seed = seed; return run_prs_demo(pro); }; });

    // sde / ue
    WiringOpts wo;
    auto* sde = app.add_subcommand("sde", "Single-decryptor encryption")->require_subcommand(1);
    auto* sd = sde->add_subcommand("demo", "Round trip over every message and issued key");
    sd->add_option("--message-bits", wo.message_bits)->capture_default_str();
    sd->add_option("--note-qubits", wo.note_qubits)->capture_default_str();
    sd->add_option("--keys", wo.keys)->capture_default_str();
    seed_opt(sd);
    sd->callback([&] { job = [&] { wo.seed = seed; return run_sde_demo(wo); }; });
    auto* ue = app.add_subcommand("ue", "Unclonable encryption")->require_subcommand(1);
    auto* ud = ue->add_subcommand("demo", "Round trips of both variants");
    ud->add_option("--message-bits", wo.message_bits)->capture_default_str();
    ud->add_option("--note-qubits", wo.note_qubits)->capture_default_str();
    ud->add_option("--trials", wo.trials)->capture_default_str();
    seed_opt(ud);
    ud->callback([&] { job = [&] { wo.seed = seed; return run_ue_demo(wo); }; });

    // game
    GameOpts go;
    auto* game = app.add_subcommand("game", "Security game harnesses")->require_subcommand(1);
    auto* gr = game->add_subcommand("run", "Repeat one game against a named adversary");
    gr->add_option("--name", go.name)
        ->check(CLI::IsMember({"strong-anti-piracy", "strong-search", "identical-challenge", "multi-challenge-ue",
                               "multi-copy-ue"}))
        ->capture_default_str();
    gr->add_option("--adversary", go.adversary)->capture_default_str();
    gr->add_option("--q", go.q)->capture_default_str();
    gr->add_option("--gamma", go.gamma)->capture_default_str();
    gr->add_option("--trials", go.trials)->capture_default_str();
    gr->add_option("--test-samples", go.test_samples)->capture_default_str();
    gr->add_option("--message-bits", go.message_bits)->capture_default_str();
    gr->add_option("--note-qubits", go.note_qubits)->capture_default_str();
    seed_opt(gr);
    gr->callback([&] { job = [&] { go.seed = seed; return run_game(go); }; });

    auto* vec = app.add_subcommand("vectors", "Golden vectors for the classical primitives");
    seed_opt(vec);
    vec->callback([&] { job = [&] { return run_vectors(seed); }; });

    // Global flags may follow the subcommand.
    std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
        for (auto* sub : a->get_subcommands({})) {
            sub->fallthrough();
            fall(sub);
        }
    };
    fall(&app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    Report report;
    try {
        report = job();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json doc;
    doc["schema_version"] = kReportSchema;
    doc["artifact_version"] = UNCLONE_VERSION;
    doc["experiment"] = report.experiment;
    doc["config"] = report.config;
    doc["seed"] = seed;
    doc["results"] = report.results;
    doc["status"] = report.passed ? "ok" : "threshold-failed";
    doc["wall_time_s"] = wall;

    const std::string text = render(doc, format);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << output << "\n";
            return kExitUsage;
        }
        out << text;
    }
    return report.passed ? 0 : kExitThreshold;
}
