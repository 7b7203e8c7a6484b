#include "unclone/mock_fe.hpp"

#include <openssl/crypto.h>

#include <stdexcept>
#include <string_view>

#include "unclone/hash.hpp"

namespace unclone {

namespace {

ByteView text(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

bool equal_ct(ByteView a, ByteView b) { return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0; }

}  // namespace

MockFe::MockFe(Bytes msk) : msk_(std::move(msk)), pk_(to_bytes(hmac_sha256(msk_, text("fe-pk")))) {}

std::shared_ptr<MockFe> MockFe::setup(Rng& rng) { return std::shared_ptr<MockFe>(new MockFe(rng.bytes(32))); }

FeFunctionKey MockFe::kg(ByteView descriptor, FeFunction f) {
    Bytes handle = to_bytes(tagged_hash(HashTag::kMockFe, {descriptor}));
    functions_.try_emplace(handle, std::move(f));
    Bytes mac = to_bytes(hmac_sha256(msk_, handle));
    return {std::move(handle), std::move(mac), shared_from_this()};
}

std::optional<Bytes> MockFe::dec(const FeFunctionKey& fsk, ByteView ct) const {
    if (ct.size() < kFeMacBytes) return std::nullopt;
    const ByteView x = ct.first(ct.size() - kFeMacBytes);
    if (!equal_ct(view(hmac_sha256(pk_, x)), ct.last(kFeMacBytes))) return std::nullopt;
    if (!equal_ct(view(hmac_sha256(msk_, fsk.handle)), fsk.mac)) return std::nullopt;
    auto it = functions_.find(fsk.handle);
    if (it == functions_.end()) return std::nullopt;
    try {
        return it->second(x);
    } catch (const ParseError&) {
        return std::nullopt;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

Bytes fe_enc(ByteView pk, ByteView x) { return concat({x, view(hmac_sha256(pk, x))}); }

std::size_t fe_ciphertext_size(std::size_t plaintext_bytes) { return plaintext_bytes + kFeMacBytes; }

}  // namespace unclone
