#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qlab {

/// One bit per element, each 0 or 1, in stream order.
using Bits = std::vector<std::uint8_t>;

/// Hex rendering of a bit string: bits are packed first-bit-most-significant
/// into bytes, the final byte zero-padded.
std::string bits_to_hex(const Bits& bits);

/// Big-endian hex of an unsigned integer without leading zeros ("0" for 0).
std::string u64_to_hex(std::uint64_t value);

/// Lowercase hex of raw bytes.
std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> hex_to_bytes(std::string_view hex);

/// Integer whose bit k is bits[k] (bits.size() <= 64).
std::uint64_t bits_to_u64_lsb_first(const Bits& bits);

std::size_t hamming_distance(const Bits& a, const Bits& b);

}  // namespace qlab
