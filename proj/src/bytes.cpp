#include "unclone/bytes.hpp"

#include <bit>
#include <cstring>

namespace unclone {

std::string to_hex(ByteView data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * data.size());
    for (auto b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw ParseError("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ParseError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

Bytes xor_bytes(ByteView a, ByteView b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bytes: length mismatch");
    Bytes out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

void put_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(Bytes& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_bytes(Bytes& out, ByteView v) { out.insert(out.end(), v.begin(), v.end()); }

ByteView ByteReader::take(std::size_t n) {
    if (remaining() < n) throw ParseError("unexpected end of input");
    auto view = data_.subspan(pos_, n);
    pos_ += n;
    return view;
}

std::uint8_t ByteReader::u8() { return take(1)[0]; }

std::uint32_t ByteReader::u32() {
    auto v = take(4);
    std::uint32_t r = 0;
    for (int i = 3; i >= 0; --i) r = (r << 8) | v[i];
    return r;
}

std::uint64_t ByteReader::u64() {
    auto v = take(8);
    std::uint64_t r = 0;
    for (int i = 7; i >= 0; --i) r = (r << 8) | v[i];
    return r;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

void ByteReader::expect_done() const {
    if (!done()) throw ParseError("trailing bytes after encoding");
}

}  // namespace unclone
