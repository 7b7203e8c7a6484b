#pragma once

#include <cstdint>
#include <vector>

#include "unclone/bytes.hpp"
#include "unclone/rng.hpp"

namespace unclone {

/// Arithmetic in GF(2^m) for 1 <= m <= 16, reduced by a fixed irreducible polynomial.
class Gf2m {
public:
    explicit Gf2m(int m);

    int bits() const { return m_; }
    std::uint32_t modulus() const { return poly_; }
    std::uint32_t size() const { return 1u << m_; }

    static std::uint32_t add(std::uint32_t a, std::uint32_t b) { return a ^ b; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

private:
    int m_;
    std::uint32_t poly_;
};

/// Degree < 2k polynomial over GF(2^m); evaluations at distinct points are
/// 2k-wise independent when the coefficients are uniform.
class KwiseFunction {
public:
    KwiseFunction(int k, int m, std::vector<std::uint32_t> coefficients, int output_bits);
    static KwiseFunction generate(int k, int m, int output_bits, Rng& rng);

    int k() const { return k_; }
    const Gf2m& field() const { return field_; }
    int output_bits() const { return output_bits_; }
    const std::vector<std::uint32_t>& coefficients() const { return coeffs_; }

    /// Raw field value sum_i c_i x^i (Horner).
    std::uint32_t field_eval(std::uint32_t x) const;
    /// Low output_bits of the field value when output_bits <= m, otherwise a
    /// hash expansion of it; at most 64 bits.
    std::uint64_t eval(std::uint64_t x) const;

private:
    int k_;
    Gf2m field_;
    std::vector<std::uint32_t> coeffs_;
    int output_bits_;
};

}  // namespace unclone
