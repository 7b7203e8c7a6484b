#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "unclone/bytes.hpp"
#include "unclone/rng.hpp"

namespace unclone {

/// Function evaluated at decryption. Throwing ParseError or invalid_argument
/// makes decryption return nullopt.
using FeFunction = std::function<Bytes(ByteView)>;

class MockFe;

struct FeFunctionKey {
    Bytes handle;  // SHA-256(0x06 || descriptor)
    Bytes mac;     // HMAC(msk, handle)
    std::shared_ptr<const MockFe> evaluator;
};

/// Correctness-only functional encryption: a trusted evaluator that holds the
/// master key and every registered function. Ciphertexts are the plaintext
/// with a MAC, so nothing is hidden.
class MockFe : public std::enable_shared_from_this<MockFe> {
public:
    static std::shared_ptr<MockFe> setup(Rng& rng);

    const Bytes& pk() const { return pk_; }
    /// Deterministic in (msk, descriptor); re-registering a descriptor keeps the first function.
    FeFunctionKey kg(ByteView descriptor, FeFunction f);
    std::optional<Bytes> dec(const FeFunctionKey& fsk, ByteView ct) const;
    std::size_t registered() const { return functions_.size(); }

private:
    explicit MockFe(Bytes msk);

    Bytes msk_;
    Bytes pk_;
    std::map<Bytes, FeFunction> functions_;
};

inline constexpr std::size_t kFeMacBytes = 32;

/// x || HMAC(pk, x).
Bytes fe_enc(ByteView pk, ByteView x);
std::size_t fe_ciphertext_size(std::size_t plaintext_bytes);

}  // namespace unclone
