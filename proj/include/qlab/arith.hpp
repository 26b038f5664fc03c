#pragma once

// 64-bit modular arithmetic and prime utilities shared by the key-exchange
// and elliptic-curve modules.

#include <cstdint>
#include <vector>

#include "qlab/rng.hpp"

namespace qlab::arith {

constexpr std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// base^exponent mod modulus by square-and-multiply. Throws DomainError for
/// modulus < 2.
std::uint64_t modexp(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Uniform random prime with exactly `bits` bits (2 <= bits <= 64).
std::uint64_t random_prime(unsigned bits, Rng& rng);

/// All primes <= limit, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Smallest prime strictly greater than n. n < 2^32.
std::uint64_t next_prime(std::uint64_t n);

/// ceil(log2 p) for p >= 2: the bit width that holds every residue mod p.
unsigned bit_width_mod(std::uint64_t p);

}  // namespace qlab::arith
