#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unclone {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

Bytes xor_bytes(ByteView a, ByteView b);

inline Bytes concat(std::initializer_list<ByteView> parts) {
    Bytes out;
    std::size_t total = 0;
    for (auto p : parts) total += p.size();
    out.reserve(total);
    for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Little-endian writers used by every canonical encoding in the library.
void put_u8(Bytes& out, std::uint8_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
void put_f64(Bytes& out, double v);
void put_bytes(Bytes& out, ByteView v);

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sequential reader over a byte buffer; throws ParseError on underflow.
class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    ByteView take(std::size_t n);

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return remaining() == 0; }
    void expect_done() const;

private:
    ByteView data_;
    std::size_t pos_ = 0;
};

// Bit i counted from the most significant bit of byte 0.
inline bool get_bit_msb(ByteView data, std::size_t i) {
    return (data[i / 8] >> (7 - i % 8)) & 1u;
}

}  // namespace unclone
