#include "unclone/hash.hpp"

// The SHA256_* streaming calls skip the EVP dispatch, which dominates the cost
// of the 33-byte hashes in GGM trees and one-time keys.
#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <stdexcept>

namespace unclone {

namespace {

void check(int ok) {
    if (ok != 1) throw std::runtime_error("OpenSSL digest failure");
}

Digest digest(const std::uint8_t* prefix, std::initializer_list<ByteView> parts) {
    SHA256_CTX ctx;
    check(SHA256_Init(&ctx));
    if (prefix) check(SHA256_Update(&ctx, prefix, 1));
    for (auto p : parts) {
        if (!p.empty()) check(SHA256_Update(&ctx, p.data(), p.size()));
    }
    Digest out{};
    check(SHA256_Final(out.data(), &ctx));
    return out;
}

}  // namespace

Digest sha256(std::initializer_list<ByteView> parts) { return digest(nullptr, parts); }

Digest sha256(ByteView data) { return digest(nullptr, {data}); }

Digest tagged_hash(HashTag tag, std::initializer_list<ByteView> parts) {
    const auto t = static_cast<std::uint8_t>(tag);
    return digest(&t, parts);
}

Bytes expand(HashTag tag, ByteView seed, std::size_t n) {
    Bytes out;
    out.reserve(n + 32);
    for (std::uint32_t ctr = 0; out.size() < n; ++ctr) {
        Bytes c;
        put_u32(c, ctr);
        auto block = tagged_hash(tag, {seed, c});
        out.insert(out.end(), block.begin(), block.end());
    }
    out.resize(n);
    return out;
}

Digest hmac_sha256(ByteView key, ByteView data) {
    Digest out{};
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len)) {
        throw std::runtime_error("OpenSSL HMAC failure");
    }
    return out;
}

}  // namespace unclone
