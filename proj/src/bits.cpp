#include "qlab/bits.hpp"

#include <algorithm>

#include "qlab/errors.hpp"

namespace qlab {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string bits_to_hex(const Bits& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    }
    return bytes_to_hex(bytes);
}

std::string u64_to_hex(std::uint64_t value) {
    if (value == 0) return "0";
    std::string out;
    while (value) {
        out.push_back(kHexDigits[value & 0xF]);
        value >>= 4;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> hex_to_bytes(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw DomainError("hex string must have an even number of digits");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw DomainError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

std::uint64_t bits_to_u64_lsb_first(const Bits& bits) {
    if (bits.size() > 64) throw DomainError("more than 64 bits do not fit an integer");
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) v |= static_cast<std::uint64_t>(bits[k] & 1U) << k;
    return v;
}

std::size_t hamming_distance(const Bits& a, const Bits& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::size_t d = std::max(a.size(), b.size()) - n;
    for (std::size_t i = 0; i < n; ++i) d += a[i] != b[i];
    return d;
}

}  // namespace qlab
