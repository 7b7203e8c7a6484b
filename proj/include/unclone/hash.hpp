#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

#include "unclone/bytes.hpp"

namespace unclone {

using Digest = std::array<std::uint8_t, 32>;

/// Single-byte domain-separation prefixes for every hash use in the library.
enum class HashTag : std::uint8_t {
    kLeftChild = 0x00,
    kRightChild = 0x01,
    kExpand = 0x02,
    kOtsChain = 0x03,
    kCoinMessage = 0x04,
    kFieldExpand = 0x05,
    kMockFe = 0x06,
};

Digest sha256(ByteView data);
Digest sha256(std::initializer_list<ByteView> parts);
Digest tagged_hash(HashTag tag, std::initializer_list<ByteView> parts);

/// `n` bytes of counter-mode expansion: H(tag || seed || ctr_le32) blocks.
Bytes expand(HashTag tag, ByteView seed, std::size_t n);

Digest hmac_sha256(ByteView key, ByteView data);

inline ByteView view(const Digest& d) { return {d.data(), d.size()}; }
inline Bytes to_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

}  // namespace unclone
