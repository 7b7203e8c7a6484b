#include "unclone/ots.hpp"

#include <algorithm>
#include <openssl/crypto.h>
#include <stdexcept>

namespace unclone {

namespace {

void check_bits(int l) {
    if (l < 1 || l > 256) throw std::invalid_argument("ots: digest bits must lie in [1, 256]");
}

ByteView block(const Bytes& data, std::size_t i) { return ByteView(data).subspan(i * kOtsBlock, kOtsBlock); }

}  // namespace

std::size_t ots_vk_size(int digest_bits) { return 2 * static_cast<std::size_t>(digest_bits) * kOtsBlock; }
std::size_t ots_sig_size(int digest_bits) { return static_cast<std::size_t>(digest_bits) * kOtsBlock; }

bool ots_digest_bit(const Digest& d, int i) { return get_bit_msb(view(d), static_cast<std::size_t>(i)); }

OtsKeypair ots_keygen(ByteView seed, int digest_bits) {
    check_bits(digest_bits);
    OtsKeypair kp;
    kp.sk.digest_bits = kp.vk.digest_bits = digest_bits;
    kp.sk.data = expand(HashTag::kExpand, seed, ots_vk_size(digest_bits));
    kp.vk.data.reserve(kp.sk.data.size());
    for (std::size_t i = 0; i < 2 * static_cast<std::size_t>(digest_bits); ++i) {
        const Digest h = tagged_hash(HashTag::kOtsChain, {block(kp.sk.data, i)});
        kp.vk.data.insert(kp.vk.data.end(), h.begin(), h.end());
    }
    return kp;
}

OtsKeypair ots_gen(Rng& rng, int digest_bits) { return ots_keygen(rng.bytes(32), digest_bits); }

Bytes ots_sign(const OtsSecretKey& sk, ByteView message) {
    check_bits(sk.digest_bits);
    if (sk.data.size() != ots_vk_size(sk.digest_bits)) throw std::invalid_argument("ots: malformed secret key");
    const Digest d = sha256(message);
    const auto l = static_cast<std::size_t>(sk.digest_bits);
    Bytes sig;
    sig.reserve(ots_sig_size(sk.digest_bits));
    for (std::size_t i = 0; i < l; ++i) {
        const auto b = static_cast<std::size_t>(ots_digest_bit(d, static_cast<int>(i)));
        auto s = block(sk.data, b * l + i);
        sig.insert(sig.end(), s.begin(), s.end());
    }
    return sig;
}

bool ots_verify(int digest_bits, ByteView vk, ByteView message, ByteView sig) {
    if (digest_bits < 1 || digest_bits > 256) return false;
    if (vk.size() != ots_vk_size(digest_bits) || sig.size() != ots_sig_size(digest_bits)) return false;
    const Digest d = sha256(message);
    const auto l = static_cast<std::size_t>(digest_bits);
    // Everything here is public, so stopping at the first bad block leaks nothing.
    for (std::size_t i = 0; i < l; ++i) {
        const auto b = static_cast<std::size_t>(ots_digest_bit(d, static_cast<int>(i)));
        const Digest h = tagged_hash(HashTag::kOtsChain, {sig.subspan(i * kOtsBlock, kOtsBlock)});
        if (CRYPTO_memcmp(h.data(), vk.subspan((b * l + i) * kOtsBlock, kOtsBlock).data(), kOtsBlock) != 0) return false;
    }
    return true;
}

bool ots_verify(const OtsVerifyKey& vk, ByteView message, ByteView sig) {
    return ots_verify(vk.digest_bits, vk.data, message, sig);
}

}  // namespace unclone
