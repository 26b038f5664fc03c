#include "qlab/arith.hpp"

#include <array>
#include <bit>

#include "qlab/errors.hpp"

namespace qlab::arith {

std::uint64_t modexp(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
    if (modulus < 2) throw DomainError("modulus must be at least 2");
    std::uint64_t result = 1;
    base %= modulus;
    while (exponent) {
        if (exponent & 1U) result = mulmod(result, base, modulus);
        base = mulmod(base, base, modulus);
        exponent >>= 1U;
    }
    return result;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    static constexpr std::array<std::uint64_t, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto p : kBases) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (auto a : kBases) {
        std::uint64_t x = modexp(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t random_prime(unsigned bits, Rng& rng) {
    if (bits < 2 || bits > 64) throw DomainError("prime bit length must be in [2, 64]");
    const std::uint64_t top = std::uint64_t{1} << (bits - 1);
    const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : (top << 1) - 1;
    if (bits == 2) return rng.below(2) ? 3 : 2;
    for (;;) {
        const std::uint64_t candidate = ((rng.next() & mask) | top) | 1U;
        if (is_prime(candidate)) return candidate;
    }
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

std::uint64_t next_prime(std::uint64_t n) {
    if (n >= (std::uint64_t{1} << 32)) throw DomainError("next_prime limited to 32-bit inputs");
    std::uint64_t c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

unsigned bit_width_mod(std::uint64_t p) {
    if (p < 2) throw DomainError("modulus must be at least 2");
    return static_cast<unsigned>(std::bit_width(p - 1));
}

}  // namespace qlab::arith
