#include "qlab/ecurve.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "qlab/arith.hpp"
#include "qlab/errors.hpp"
#include "qlab/rng.hpp"

namespace qlab::ec {
namespace {

// Oracle: enumerate every (x, y) in F_p^2, plus the point at infinity.
std::uint64_t brute_force_points(const Curve& c, std::uint64_t p) {
    const auto P = static_cast<std::int64_t>(p);
    auto md = [P](std::int64_t v) { return ((v % P) + P) % P; };
    std::uint64_t n = 1;
    for (std::int64_t x = 0; x < P; ++x) {
        const std::int64_t rhs = md(md(x * x % P * x) + md(c.a) * x + md(c.b));
        for (std::int64_t y = 0; y < P; ++y) n += (y * y % P) == rhs;
    }
    return n;
}

// Oracle: number of roots of x^3 + a x + b in F_p by exhaustive search.
int roots_mod_p(std::int64_t a, std::int64_t b, std::int64_t p) {
    int r = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t v = ((x * x % p * x + (a % p + p) % p * x + (b % p + p) % p) % p);
        r += v == 0;
    }
    return r;
}

// Oracle for the splitting-field degree from factorization-type frequencies
// (Frobenius cycle types): any prime with no root rules out d in {1,2}; any
// prime with exactly one root rules out d in {1,3}.
int degree_from_factorization_types(std::int64_t a, std::int64_t b) {
    const Curve c{a, b};
    bool saw_none = false;
    bool saw_one = false;
    for (auto p : arith::primes_up_to(3000)) {
        if (!is_good_prime(c, p)) continue;
        const int r = roots_mod_p(a, b, p);
        saw_none |= r == 0;
        saw_one |= r == 1;
    }
    if (saw_none && saw_one) return 6;
    if (saw_none) return 3;
    if (saw_one) return 2;
    return 1;
}

Curve random_curve(Rng& rng, std::int64_t range = 50) {
    for (;;) {
        Curve c{rng.between(-range, range), rng.between(-range, range)};
        if (c.discriminant() != 0) return c;
    }
}

TEST(CountPoints, SmallExample) {
    const Curve c{1, 1};
    EXPECT_EQ(brute_force_points(c, 5), 9u);
    EXPECT_EQ(count_points(c, 5), 9u);
    EXPECT_EQ(frobenius_trace(c, 5), -3);
}

TEST(CountPoints, AgreesWithEnumeration) {
    Rng rng(1);
    const auto primes = arith::primes_up_to(200);
    for (int i = 0; i < 300; ++i) {
        const Curve c = random_curve(rng);
        const std::uint64_t p = primes[2 + rng.below(primes.size() - 2)];
        if (!is_good_prime(c, p)) continue;
        ASSERT_EQ(count_points(c, p), brute_force_points(c, p)) << c.a << " " << c.b << " " << p;
    }
}

TEST(CountPoints, HasseBound) {
    Rng rng(2);
    const auto primes = arith::primes_up_to(20000);
    int checked = 0;
    while (checked < 1000) {
        const Curve c = random_curve(rng, 1000);
        const std::uint64_t p = primes[2 + rng.below(primes.size() - 2)];
        if (!is_good_prime(c, p)) continue;
        const auto t = frobenius_trace(c, p);
        ASSERT_LE(static_cast<double>(t * t), 4.0 * static_cast<double>(p));
        const auto n = count_points(c, p);
        ASSERT_EQ((t & 1), ((static_cast<std::int64_t>(n) - static_cast<std::int64_t>(p) - 1) & 1));
        ++checked;
    }
}

TEST(CountPoints, BadPrimeRejected) {
    const Curve c{0, -2};  // discriminant 108 = 2^2 3^3
    EXPECT_THROW(count_points(c, 3), DomainError);
    EXPECT_THROW(count_points(c, 2), DomainError);
    const Curve d{-1, 0};
    EXPECT_THROW(count_points(d, 9), DomainError);
}

TEST(BadPrimeCoefficient, MatchesSingularCount) {
    // On the singular reduction the same count gives a(p) = p + 1 - #points.
    Rng rng(3);
    int checked = 0;
    for (int i = 0; i < 4000 && checked < 200; ++i) {
        const Curve c = random_curve(rng, 200);
        for (auto p : arith::primes_up_to(97)) {
            if (p < 5 || is_good_prime(c, p)) continue;
            const auto expected = static_cast<std::int64_t>(p) + 1 - static_cast<std::int64_t>(brute_force_points(c, p));
            ASSERT_EQ(bad_prime_coefficient(c, p), expected) << c.a << " " << c.b << " " << p;
            ++checked;
        }
    }
    EXPECT_GE(checked, 100);
}

TEST(CubicDegree, Examples) {
    EXPECT_EQ(cubic_degree(-1, 0).d, 1);
    EXPECT_EQ(cubic_degree(0, -1).d, 2);
    EXPECT_EQ(Curve({-3, 1}).cubic_discriminant(), 81);
    EXPECT_EQ(cubic_degree(-3, 1).d, 3);
    EXPECT_EQ(Curve({0, -2}).cubic_discriminant(), -108);
    EXPECT_EQ(cubic_degree(0, -2).d, 6);
    EXPECT_THROW(cubic_degree(-3, 2), DomainError);  // (x-1)^2 (x+2)
    EXPECT_THROW(cubic_degree(0, 0), DomainError);
}

TEST(CubicDegree, AgreesWithFactorizationTypes) {
    Rng rng(4);
    std::map<int, int> seen;
    // Mix in curves built from chosen roots so every degree is exercised.
    std::vector<Curve> curves{{-7, 6}, {-13, 12}, {-3, 1}, {-7, 7}, {0, -1}, {-2, -4}};
    while (curves.size() < 50) curves.push_back(random_curve(rng, 40));
    for (const auto& c : curves) {
        const int d = cubic_degree(c.a, c.b).d;
        ASSERT_EQ(d, degree_from_factorization_types(c.a, c.b)) << c.a << " " << c.b;
        ++seen[d];
    }
    EXPECT_EQ(seen.size(), 4u);
}

TEST(ZetaCoeffs, Normalization) {
    const Curve c{1, 1};
    const auto z = zeta_coeffs(c, 30);
    EXPECT_EQ(z.at(1), 1);
    EXPECT_EQ(z.at(15), z.at(3) * z.at(5));
    EXPECT_EQ(z.at(25), z.at(5) * z.at(5) - 5 * z.at(1));
    EXPECT_EQ(z.at(5), -3);
    EXPECT_THROW(zeta_coeffs(c, 0), DomainError);
}

// Independent recomputation of a(n): trial-division factorization, a(p) by
// enumeration, prime powers by explicit recursion per factor.
std::int64_t direct_coefficient(const Curve& c, std::uint64_t n) {
    std::int64_t result = 1;
    for (std::uint64_t p = 2; n > 1; ++p) {
        if (n % p) continue;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        const bool good = is_good_prime(c, p);
        const auto ap = good ? static_cast<std::int64_t>(p) + 1 - static_cast<std::int64_t>(brute_force_points(c, p))
                             : bad_prime_coefficient(c, p);
        std::int64_t prev2 = 1, prev = ap;
        for (int e = 2; e <= k; ++e) {
            const std::int64_t next = good ? ap * prev - static_cast<std::int64_t>(p) * prev2 : ap * prev;
            prev2 = prev;
            prev = next;
        }
        result *= prev;
    }
    return result;
}

TEST(ZetaCoeffs, MatchDirectRecomputation) {
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        const Curve c = random_curve(rng, 30);
        const auto z = zeta_coeffs(c, 200);
        for (std::uint64_t n = 1; n <= 200; ++n) {
            ASSERT_EQ(z.at(n), direct_coefficient(c, n)) << c.a << " " << c.b << " n=" << n;
        }
        for (auto p : arith::primes_up_to(200)) {
            if (is_good_prime(c, p)) {
                ASSERT_LE(static_cast<double>(z.at(p) * z.at(p)), 4.0 * p);
            }
        }
    }
}

TEST(DensityScan, DegreeOneHasOnlyFiniteExceptions) {
    const auto r = density_scan({-1, 0}, 10000);
    EXPECT_GT(r.primes_scanned, 1000u);
    EXPECT_GE(r.even_fraction, 0.99);
    EXPECT_LE(r.odd_primes.size(), r.odd_count);
    EXPECT_EQ(r.excluded_bad_primes, std::vector<std::uint64_t>{2});
}

TEST(DensityScan, DegreeSixAndThreeAtModerateBound) {
    const auto six = density_scan({0, -2}, 20000);
    EXPECT_NEAR(six.even_fraction, 2.0 / 3.0, 0.03);
    EXPECT_EQ(six.excluded_bad_primes, (std::vector<std::uint64_t>{2, 3}));
    const auto three = density_scan({-3, 1}, 20000);
    EXPECT_NEAR(three.even_fraction, 1.0 / 3.0, 0.03);
}

TEST(DensityScan, WorkerCountInvariant) {
    const auto one = density_scan({5, 7}, 5000, 1);
    const auto four = density_scan({5, 7}, 5000, 4);
    EXPECT_EQ(one.even_count, four.even_count);
    EXPECT_EQ(one.odd_primes, four.odd_primes);
    EXPECT_EQ(one.excluded_bad_primes, four.excluded_bad_primes);
    EXPECT_THROW(density_scan({5, 7}, 99), DomainError);
}

TEST(DensityScan, ConvergesTowardTarget) {
    for (const auto& [curve, target] : {std::pair{Curve{0, -2}, 2.0 / 3.0}, std::pair{Curve{-3, 1}, 1.0 / 3.0}}) {
        const double small = std::abs(density_scan(curve, 1000).even_fraction - target);
        const double large = std::abs(density_scan(curve, 100000).even_fraction - target);
        EXPECT_LE(large, small + 0.02);
    }
}

TEST(PngElliptic, Deterministic) {
    const auto a = png_elliptic(7, 200);
    const auto b = png_elliptic(7, 200);
    EXPECT_EQ(a.curve, b.curve);
    EXPECT_EQ(a.bits, b.bits);
    EXPECT_EQ(cubic_degree(a.curve.a, a.curve.b).d, 6);
    EXPECT_THROW(png_elliptic(7, 0), DomainError);
}

TEST(PngElliptic, DistinctSeedsDistinctCurves) {
    EXPECT_NE(png_elliptic(1, 8).curve, png_elliptic(2, 8).curve);
}

TEST(PngElliptic, ZeroFrequency) {
    const auto out = png_elliptic(2024, 10000);
    ASSERT_EQ(out.bits.size(), 10000u);
    std::size_t zeros = 0;
    for (auto b : out.bits) zeros += b == 0;
    EXPECT_NEAR(zeros / 10000.0, 2.0 / 3.0, 0.03);
}

}  // namespace
}  // namespace qlab::ec
