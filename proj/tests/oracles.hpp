#pragma once

// Straight-line reference implementations used to cross-check the library.
// They call OpenSSL directly and share no code with src/.

#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace oracle {

using Bytes = std::vector<std::uint8_t>;

inline Bytes sha256(const Bytes& in) {
    Bytes out(32);
    SHA256(in.data(), in.size(), out.data());
    return out;
}

inline Bytes cat(Bytes a, const Bytes& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Bytes tagged(std::uint8_t tag, const Bytes& body) { return sha256(cat(Bytes{tag}, body)); }

inline Bytes expand(std::uint8_t tag, const Bytes& seed, std::size_t n) {
    Bytes out;
    for (std::uint32_t c = 0; out.size() < n; ++c) {
        Bytes ctr = {std::uint8_t(c), std::uint8_t(c >> 8), std::uint8_t(c >> 16), std::uint8_t(c >> 24)};
        out = cat(out, tagged(tag, cat(seed, ctr)));
    }
    out.resize(n);
    return out;
}

inline Bytes hmac(const Bytes& key, const Bytes& data) {
    Bytes out(32);
    unsigned int len = 0;
    HMAC(EVP_sha256(), key.data(), int(key.size()), data.data(), data.size(), out.data(), &len);
    return out;
}

// GGM: bit b of the input (MSB first) selects H(b || seed).
inline Bytes ggm_leaf(Bytes seed, int in_bits, std::uint64_t x) {
    for (int i = in_bits - 1; i >= 0; --i) seed = tagged(std::uint8_t((x >> i) & 1), seed);
    return seed;
}

inline Bytes ggm_eval(const Bytes& root, int in_bits, int out_bits, std::uint64_t x) {
    Bytes out = expand(0x02, ggm_leaf(root, in_bits, x), (out_bits + 7) / 8);
    if (out_bits % 8) out.back() &= std::uint8_t(0xFF << (8 - out_bits % 8));
    return out;
}

// Maximal subtrees (depth, prefix) that avoid every point of S: the nodes a
// punctured key must hold. Found by walking every node of the tree.
inline std::vector<std::pair<int, std::uint64_t>> free_subtrees(int in_bits, const std::vector<std::uint64_t>& s) {
    auto hits = [&](int depth, std::uint64_t prefix) {
        return std::any_of(s.begin(), s.end(), [&](std::uint64_t x) { return (x >> (in_bits - depth)) == prefix; });
    };
    std::vector<std::pair<int, std::uint64_t>> out;
    for (int d = 1; d <= in_bits; ++d) {
        for (std::uint64_t p = 0; p < (std::uint64_t{1} << d); ++p) {
            if (!hits(d, p) && hits(d - 1, p >> 1)) out.emplace_back(d, p);
        }
    }
    return out;
}

// Distinct-type average against the Haar t-copy average. Both are flat on
// their supports inside the symmetric subspace, so
// TD = 1 - C(d, t) / C(d + t - 1, t).
inline double type_haar_td(int n, int t) {
    const double d = std::ldexp(1.0, n);
    double distinct = 1.0;
    double sym = 1.0;
    for (int i = 0; i < t; ++i) {
        distinct *= (d - i) / (i + 1);
        sym *= (d + i) / (i + 1);
    }
    return 1.0 - distinct / sym;
}

// E_P ||zeta_empty||^2 for uniform queries over a domain of `domain` points
// and a uniformly random P into ell buckets, k = 2.
inline double small_range_mean_k2(double domain, double ell) { return (1.0 - 1.0 / domain) * (1.0 - 1.0 / ell); }

// The mock single-key encryption, written out from its byte layout.
struct OneLayout {
    int note_qubits;
    int message_bits;
    std::size_t sn_bytes() const { return 1 + std::size_t(note_qubits / 2) * ((note_qubits + 7) / 8); }
    std::size_t m_bytes() const { return (message_bits + 7) / 8; }
    std::size_t pk_bytes() const { return sn_bytes() + 32 + 16; }
    std::size_t ct_bytes() const { return 16 + m_bytes() + 16; }
};

inline Bytes text(const std::string& s) { return Bytes(s.begin(), s.end()); }

inline Bytes one_enc(const OneLayout& l, const Bytes& pk, const Bytes& m, const Bytes& r) {
    const Bytes th(pk.begin() + long(l.sn_bytes()), pk.begin() + long(l.sn_bytes()) + 32);
    const Bytes nonce(r.begin(), r.begin() + 16);
    const Bytes pad = expand(0x06, cat(cat(text("one-pad"), th), nonce), m.size());
    Bytes body(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) body[i] = m[i] ^ pad[i];
    Bytes tag = hmac(th, cat(nonce, body));
    tag.resize(16);
    return cat(cat(nonce, body), tag);
}

// RE[pk] on m || K || mode || pk' || ct*, K as u32 in, u32 out, 32-byte root.
inline Bytes re_eval(const OneLayout& l, const Bytes& pk, const Bytes& input) {
    std::size_t off = 0;
    auto take = [&](std::size_t n) {
        Bytes b(input.begin() + long(off), input.begin() + long(off + n));
        off += n;
        return b;
    };
    const Bytes m = take(l.m_bytes());
    const Bytes kin = take(4);
    const Bytes kout = take(4);
    const Bytes root = take(32);
    const std::uint8_t mode = take(1)[0];
    const Bytes pk2 = take(l.pk_bytes());
    const Bytes ct_star = take(l.ct_bytes());
    const int in_bits = kin[0] | kin[1] << 8 | kin[2] << 16 | kin[3] << 24;
    const int out_bits = kout[0] | kout[1] << 8 | kout[2] << 16 | kout[3] << 24;

    const Bytes h = sha256(pk);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = x << 8 | h[i];
    const Bytes r = ggm_eval(root, in_bits, out_bits, x);

    const int c = std::memcmp(pk.data() + pk.size() - 16, pk2.data() + pk2.size() - 16, 16);
    const Bytes zero(m.size(), 0);
    if (mode == 0) return one_enc(l, pk, m, r);
    if (mode == 1) return one_enc(l, pk, c <= 0 ? zero : m, r);
    if (c == 0) return ct_star;
    return one_enc(l, pk, c < 0 ? zero : m, r);
}

}  // namespace oracle
