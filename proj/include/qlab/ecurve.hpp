#pragma once

// Elliptic curves y^2 = x^3 + a x + b over small prime fields: point counts,
// the trace c_E(p) = p + 1 - #E(F_p), the multiplicative coefficient
// sequence a(n), the degree of the splitting field of x^3 + a x + b, parity
// density scans, and a parity-based pseudorandom bit generator.
//
// Two discriminants appear. `Curve::discriminant()` is 4a^3 + 27b^2 (the
// quantity whose prime divisors are the bad primes, and whose range the
// coin-flip setup constrains). The discriminant of the cubic itself is its
// negation, -4a^3 - 27b^2, and is what the square test in cubic_degree uses.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qlab/bits.hpp"

namespace qlab::ec {

inline constexpr std::int64_t kMaxCoefficient = std::int64_t{1} << 20;

struct Curve {
    std::int64_t a{0};
    std::int64_t b{0};

    /// 4a^3 + 27b^2. Throws DomainError if |a| or |b| exceeds kMaxCoefficient.
    std::int64_t discriminant() const;
    /// Discriminant of the cubic x^3 + a x + b: -(4a^3 + 27b^2).
    std::int64_t cubic_discriminant() const { return -discriminant(); }

    friend bool operator==(const Curve&, const Curve&) = default;
};

/// p is a good prime when the short Weierstrass model reduces to an
/// elliptic curve mod p: p odd and p does not divide 4a^3 + 27b^2. p = 2 is
/// always bad for this model.
bool is_good_prime(const Curve& curve, std::uint64_t p);

/// Projective points over F_p, including the point at infinity. Requires a
/// good prime p < 2^32; throws DomainError otherwise.
std::uint64_t count_points(const Curve& curve, std::uint64_t p);

/// c_E(p) = p + 1 - #E(F_p).
std::int64_t frobenius_trace(const Curve& curve, std::uint64_t p);

/// Local coefficient at a bad prime from the reduction type: 0 for a cusp
/// (additive), +1 for a node with rational tangents (split multiplicative),
/// -1 otherwise (non-split).
std::int64_t bad_prime_coefficient(const Curve& curve, std::uint64_t p);

/// Degree over Q of the splitting field of x^3 + a x + b: 1, 2, 3 or 6.
struct CubicDegree {
    int d{6};
    friend bool operator==(const CubicDegree&, const CubicDegree&) = default;
};

CubicDegree cubic_degree(std::int64_t a, std::int64_t b);

/// Distinct integer roots of x^3 + a x + b (all rational roots are integers).
std::vector<std::int64_t> integer_roots(std::int64_t a, std::int64_t b);

struct ZetaCoeffs {
    std::size_t m{0};
    std::vector<std::int64_t> values;  // values[n - 1] = a(n)

    std::int64_t at(std::size_t n) const { return values.at(n - 1); }
};

/// a(1..m): a(p) = c_E(p) at good primes, the reduction-type value at bad
/// ones; a(p^k) = a(p) a(p^{k-1}) - p a(p^{k-2}) at good p and a(p)^k at bad
/// p; multiplicative across coprime factors.
ZetaCoeffs zeta_coeffs(const Curve& curve, std::size_t m);

struct DensityReport {
    std::uint64_t bound{0};
    std::size_t primes_scanned{0};
    std::size_t even_count{0};
    double even_fraction{0.0};
    std::vector<std::uint64_t> excluded_bad_primes;
    std::size_t odd_count{0};
    std::vector<std::uint64_t> odd_primes;  // first kMaxListedOddPrimes only
};

inline constexpr std::size_t kMaxListedOddPrimes = 32;

/// Fraction of good primes p <= bound with c_E(p) even. bound >= 100.
/// `workers` threads split the prime range; the report does not depend on it.
DensityReport density_scan(const Curve& curve, std::uint64_t bound, unsigned workers = 1);

struct PngOutput {
    Curve curve;
    std::size_t curves_tried{0};
    Bits bits;  // bit i = c_E(p_i) mod 2 over successive good primes
};

/// Coefficient range searched by png_elliptic.
inline constexpr std::int64_t kPngCoefficientRange = 64;

/// Seeded choice of a degree-6 curve, then its trace parities.
PngOutput png_elliptic(std::uint64_t seed, std::size_t n_bits);

}  // namespace qlab::ec
