#include "unclone/kwise.hpp"

#include <array>
#include <stdexcept>

#include "unclone/hash.hpp"

namespace unclone {

namespace {

// Low-weight irreducible polynomials, index m; 0x11B is the AES field.
constexpr std::array<std::uint32_t, 17> kIrreducible = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11B,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1002B,
};

}  // namespace

Gf2m::Gf2m(int m) : m_(m) {
    if (m < 1 || m > 16) throw std::invalid_argument("GF(2^m): m must lie in [1, 16]");
    poly_ = kIrreducible[m];
}

std::uint32_t Gf2m::mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0;
    const std::uint32_t top = 1u << m_;
    while (b) {
        if (b & 1u) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= poly_;
    }
    return r;
}

std::uint32_t Gf2m::pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e) {
        if (e & 1u) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

KwiseFunction::KwiseFunction(int k, int m, std::vector<std::uint32_t> coefficients, int output_bits)
    : k_(k), field_(m), coeffs_(std::move(coefficients)), output_bits_(output_bits) {
    if (k < 1) throw std::invalid_argument("kwise: k must be positive");
    if (coeffs_.size() != static_cast<std::size_t>(2 * k)) throw std::invalid_argument("kwise: need 2k coefficients");
    for (auto c : coeffs_) {
        if (c >= field_.size()) throw std::out_of_range("kwise: coefficient outside the field");
    }
    if (output_bits < 1 || output_bits > 64) throw std::invalid_argument("kwise: output bits must lie in [1, 64]");
}

KwiseFunction KwiseFunction::generate(int k, int m, int output_bits, Rng& rng) {
    Gf2m f(m);
    std::vector<std::uint32_t> c(2 * static_cast<std::size_t>(k));
    for (auto& v : c) v = static_cast<std::uint32_t>(rng.below(f.size()));
    return KwiseFunction(k, m, std::move(c), output_bits);
}

std::uint32_t KwiseFunction::field_eval(std::uint32_t x) const {
    if (x >= field_.size()) throw std::out_of_range("kwise: input outside the field");
    std::uint32_t acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = field_.mul(acc, x) ^ *it;
    return acc;
}

std::uint64_t KwiseFunction::eval(std::uint64_t x) const {
    if (x >= field_.size()) throw std::out_of_range("kwise: input outside the field");
    const std::uint32_t v = field_eval(static_cast<std::uint32_t>(x));
    if (output_bits_ <= field_.bits()) return v & ((std::uint64_t{1} << output_bits_) - 1);
    Bytes seed;
    put_u32(seed, v);
    const Bytes out = expand(HashTag::kFieldExpand, seed, 8);
    std::uint64_t r = 0;
    for (auto b : out) r = (r << 8) | b;
    return output_bits_ == 64 ? r : r >> (64 - output_bits_);
}

}  // namespace unclone
