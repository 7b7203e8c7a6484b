#include "unclone/detsig.hpp"

#include <set>
#include <stdexcept>

namespace unclone {

namespace {

bool message_bit(std::uint64_t m, int n, int t) { return (m >> (n - t)) & 1u; }  // t in [1, n]

void check_message(const DetsigParams& p, std::uint64_t m) {
    if ((m >> p.message_bits) != 0) throw std::out_of_range("detsig: message wider than n bits");
}

Bytes link_payload(const OtsVerifyKey& a, const OtsVerifyKey& b) { return concat({a.data, b.data}); }

}  // namespace

void DetsigParams::validate() const {
    if (message_bits < 1 || message_bits > kDetsigMaxMessageBits) throw std::invalid_argument("detsig: n out of range");
    if (tag_bits < 8 || tag_bits % 8 != 0) throw std::invalid_argument("detsig: tag bits must be a positive multiple of 8");
    if (digest_bits < 1 || digest_bits > 256) throw std::invalid_argument("detsig: digest bits must lie in [1, 256]");
}

std::size_t detsig_signature_size(const DetsigParams& p) {
    const std::size_t vk = ots_vk_size(p.digest_bits);
    const std::size_t sig = ots_sig_size(p.digest_bits);
    return static_cast<std::size_t>(p.message_bits) * (2 * vk + sig) + static_cast<std::size_t>(p.tag_bits) / 8 + sig;
}

Bytes TreeSignature::serialize() const {
    Bytes out;
    for (const auto& l : links) {
        put_bytes(out, l.pl0.data);
        put_bytes(out, l.pl1.data);
        put_bytes(out, l.sigpl);
    }
    put_bytes(out, y);
    put_bytes(out, isig);
    return out;
}

std::optional<TreeSignature> TreeSignature::parse(const DetsigParams& p, ByteView data) {
    if (data.size() != detsig_signature_size(p)) return std::nullopt;
    const std::size_t vk = ots_vk_size(p.digest_bits);
    const std::size_t sig = ots_sig_size(p.digest_bits);
    ByteReader r(data);
    auto take = [&](std::size_t n) {
        auto s = r.take(n);
        return Bytes(s.begin(), s.end());
    };
    TreeSignature out;
    for (int t = 0; t < p.message_bits; ++t) {
        DetsigLink l;
        l.pl0 = {p.digest_bits, take(vk)};
        l.pl1 = {p.digest_bits, take(vk)};
        l.sigpl = take(sig);
        out.links.push_back(std::move(l));
    }
    out.y = take(static_cast<std::size_t>(p.tag_bits) / 8);
    out.isig = take(sig);
    return out;
}

std::pair<DetsigVerifyKey, DetsigSecretKey> detsig_setup(const DetsigParams& params, Rng& rng) {
    params.validate();
    OtsKeypair root = ots_gen(rng, params.digest_bits);
    PprfKey k = PprfKey::generate(8 + params.message_bits, 256, rng);
    PprfKey k2 = PprfKey::generate(params.message_bits, params.tag_bits, rng);
    return {DetsigVerifyKey{params, root.vk}, DetsigSecretKey{params, root.sk, k, k2}};
}

std::uint64_t detsig_prefix_input(int n, int len, std::uint64_t prefix) {
    if (len < 0 || len > n) throw std::out_of_range("detsig: prefix length out of range");
    return (static_cast<std::uint64_t>(len) << n) | (prefix << (n - len));
}

OtsKeypair detsig_prefix_keypair(const DetsigSecretKey& sk, int len, std::uint64_t prefix) {
    const Bytes seed = sk.k.eval(detsig_prefix_input(sk.params.message_bits, len, prefix));
    return ots_keygen(seed, sk.params.digest_bits);
}

TreeSignature detsig_sign(const DetsigSecretKey& sk, std::uint64_t m) {
    const int n = sk.params.message_bits;
    check_message(sk.params, m);
    TreeSignature sig;
    sig.links.reserve(n);
    OtsSecretKey parent = sk.sk_root;
    for (int t = 1; t <= n; ++t) {
        const std::uint64_t pref = m >> (n - t + 1);  // pref_{t-1}(m)
        OtsKeypair c0 = detsig_prefix_keypair(sk, t, pref << 1);
        OtsKeypair c1 = detsig_prefix_keypair(sk, t, (pref << 1) | 1u);
        DetsigLink link{c0.vk, c1.vk, ots_sign(parent, link_payload(c0.vk, c1.vk))};
        parent = message_bit(m, n, t) ? std::move(c1.sk) : std::move(c0.sk);
        sig.links.push_back(std::move(link));
    }
    sig.y = sk.k2.eval(m);
    sig.isig = ots_sign(parent, sig.y);
    return sig;
}

bool detsig_verify(const DetsigVerifyKey& vk, std::uint64_t m, const TreeSignature& sig) {
    const auto& p = vk.params;
    const int n = p.message_bits;
    if ((m >> n) != 0) return false;
    if (sig.links.size() != static_cast<std::size_t>(n)) return false;
    if (sig.y.size() != static_cast<std::size_t>(p.tag_bits) / 8) return false;
    const OtsVerifyKey* current = &vk.vk_root;
    for (int t = 1; t <= n; ++t) {
        const auto& l = sig.links[t - 1];
        if (l.pl0.digest_bits != p.digest_bits || l.pl1.digest_bits != p.digest_bits) return false;
        if (!ots_verify(*current, link_payload(l.pl0, l.pl1), l.sigpl)) return false;
        current = message_bit(m, n, t) ? &l.pl1 : &l.pl0;
    }
    return ots_verify(*current, sig.y, sig.isig);
}

bool detsig_verify(const DetsigVerifyKey& vk, std::uint64_t m, ByteView sig) {
    // Walks the fixed layout in place; pl0 || pl1 is contiguous, so each link's
    // signed payload is a plain subspan.
    const auto& p = vk.params;
    const int n = p.message_bits;
    if ((m >> n) != 0 || sig.size() != detsig_signature_size(p)) return false;
    const std::size_t vks = ots_vk_size(p.digest_bits);
    const std::size_t ss = ots_sig_size(p.digest_bits);
    ByteView current = vk.vk_root.data;
    if (vk.vk_root.digest_bits != p.digest_bits) return false;
    std::size_t off = 0;
    for (int t = 1; t <= n; ++t) {
        const ByteView payload = sig.subspan(off, 2 * vks);
        if (!ots_verify(p.digest_bits, current, payload, sig.subspan(off + 2 * vks, ss))) return false;
        current = payload.subspan(message_bit(m, n, t) ? vks : 0, vks);
        off += 2 * vks + ss;
    }
    const ByteView y = sig.subspan(off, static_cast<std::size_t>(p.tag_bits) / 8);
    return ots_verify(p.digest_bits, current, y, sig.subspan(off + y.size(), ss));
}

std::size_t BzSigningOracle::message_bytes() const { return (static_cast<std::size_t>(sk_.params.message_bits) + 7) / 8; }

void BzSigningOracle::spend() {
    if (used_ >= budget_) throw QueryBudgetExceeded("signing oracle query budget exhausted");
    ++used_;
}

HybridState BzSigningOracle::query(const HybridState& state) {
    spend();
    const std::size_t width = signature_bytes();
    return state.map_branches(state.payload_qubits(), [&](const Label& label, const Branch& b) {
        if (label.size() != 2 || label[0].size() != message_bytes() || label[1].size() != width) {
            throw DimensionError("signing oracle: query registers must be (message, signature-width)");
        }
        const std::uint64_t m = decode_label_value(label[0]);
        Label out{label[0], xor_bytes(label[1], detsig_sign(sk_, m).serialize())};
        return std::vector<HybridState::Term>{{std::move(out), b.amplitude, b.payload}};
    });
}

Bytes BzSigningOracle::sign(std::uint64_t message) {
    spend();
    return detsig_sign(sk_, message).serialize();
}

BzResult bz_game(const DetsigParams& params, int k, int query_budget, const BzAdversary& adversary, Rng& rng) {
    if (k < 0 || query_budget < 0) throw std::invalid_argument("bz_game: negative budget");
    auto [vk, sk] = detsig_setup(params, rng);
    BzSigningOracle oracle(sk, query_budget);
    Rng adv_rng = rng.split(1);
    BzOutput out = adversary(vk, oracle, adv_rng);
    BzResult r{false, oracle.queries(), out.size(), true, 0};
    std::set<std::uint64_t> seen;
    for (const auto& [m, s] : out) {
        if (!seen.insert(m).second) r.distinct = false;
        if (detsig_verify(vk, m, s)) ++r.valid;
    }
    r.success = out.size() == static_cast<std::size_t>(k) + 1 && r.distinct && r.valid == out.size();
    return r;
}

}  // namespace unclone
