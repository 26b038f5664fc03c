#include "qlab/ecurve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "qlab/arith.hpp"
#include "qlab/errors.hpp"
#include "qlab/rng.hpp"

namespace qlab::ec {

namespace {

using i128 = __int128;

std::int64_t mod(i128 v, std::uint64_t p) {
    auto r = static_cast<std::int64_t>(v % static_cast<i128>(p));
    return r < 0 ? r + static_cast<std::int64_t>(p) : r;
}

void check_coefficients(const Curve& c) {
    if (std::llabs(c.a) > kMaxCoefficient || std::llabs(c.b) > kMaxCoefficient) {
        throw DomainError("curve coefficients exceed desk-scale range");
    }
}

bool is_square(i128 v) {
    if (v < 0) return false;
    auto r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v;
}

// chi[v] = Legendre symbol (v / p) for v in [0, p).
std::vector<std::int8_t> legendre_table(std::uint64_t p) {
    std::vector<std::int8_t> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
    return chi;
}

// sum over x in F_p of chi(x^3 + a x + b), i.e. #E(F_p) - (p + 1). The
// cubic is stepped by forward differences: f(x+1) - f(x) = 3x^2 + 3x + 1 + a,
// whose own differences are 6x + 6 and then 6.
std::int64_t character_sum(const Curve& c, std::uint64_t p, const std::vector<std::int8_t>& chi) {
    auto add = [p](std::uint64_t u, std::uint64_t v) {
        const std::uint64_t s = u + v;
        return s >= p ? s - p : s;
    };
    const std::uint64_t six = 6 % p;
    std::uint64_t f = static_cast<std::uint64_t>(mod(c.b, p));
    std::uint64_t d1 = static_cast<std::uint64_t>(mod(i128{c.a} + 1, p));
    std::uint64_t d2 = six;
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        sum += chi[f];
        f = add(f, d1);
        d1 = add(d1, d2);
        d2 = add(d2, six);
    }
    return sum;
}

std::uint64_t inverse_mod(std::uint64_t v, std::uint64_t p) { return arith::modexp(v, p - 2, p); }

}  // namespace

std::int64_t Curve::discriminant() const {
    check_coefficients(*this);
    const i128 d = i128{4} * a * a * a + i128{27} * b * b;
    return static_cast<std::int64_t>(d);
}

bool is_good_prime(const Curve& curve, std::uint64_t p) {
    if (p < 3 || !arith::is_prime(p)) return false;
    return curve.discriminant() % static_cast<std::int64_t>(p) != 0;
}

std::uint64_t count_points(const Curve& curve, std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 32)) throw DomainError("point counting limited to p < 2^32");
    if (!is_good_prime(curve, p)) {
        throw DomainError("p = " + std::to_string(p) + " is not a good prime for this curve");
    }
    const auto chi = legendre_table(p);
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + 1 + character_sum(curve, p, chi));
}

std::int64_t frobenius_trace(const Curve& curve, std::uint64_t p) {
    return static_cast<std::int64_t>(p) + 1 - static_cast<std::int64_t>(count_points(curve, p));
}

std::int64_t bad_prime_coefficient(const Curve& curve, std::uint64_t p) {
    if (!arith::is_prime(p)) throw DomainError("bad-prime coefficient needs a prime");
    if (is_good_prime(curve, p)) throw DomainError("p is a good prime for this curve");
    if (p <= 3) return 0;  // the model's singularity is a cusp in characteristic 2 and 3
    const auto a = static_cast<std::uint64_t>(mod(curve.a, p));
    const auto b = static_cast<std::uint64_t>(mod(curve.b, p));
    if (a == 0) return 0;  // then b = 0 too: y^2 = x^3
    // Node at (x0, 0) with x0 = -3b / (2a); tangent slopes square to 3 x0.
    const std::uint64_t x0 = (p - 3 * b % p) % p * inverse_mod(2 * a % p, p) % p;
    const std::uint64_t slope_sq = 3 * x0 % p;
    const bool split = arith::modexp(slope_sq, (p - 1) / 2, p) == 1;
    return split ? 1 : -1;
}

std::vector<std::int64_t> integer_roots(std::int64_t a, std::int64_t b) {
    std::vector<std::int64_t> roots;
    auto is_root = [&](std::int64_t r) {
        return i128{r} * r * r + i128{a} * r + b == 0;
    };
    auto consider = [&](std::int64_t r) {
        if (is_root(r) && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    };
    if (b == 0) {
        consider(0);
        if (a < 0 && is_square(-i128{a})) {
            const auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(-a))));
            consider(s);
            consider(-s);
        }
    } else {
        const std::int64_t n = std::llabs(b);
        for (std::int64_t d = 1; d * d <= n; ++d) {
            if (n % d != 0) continue;
            for (std::int64_t r : {d, -d, n / d, -(n / d)}) consider(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

CubicDegree cubic_degree(std::int64_t a, std::int64_t b) {
    const Curve c{a, b};
    if (c.discriminant() == 0) throw DomainError("cubic has a repeated root");
    switch (integer_roots(a, b).size()) {
        case 3: return {1};
        case 1: return {2};
        case 0: return {is_square(c.cubic_discriminant()) ? 3 : 6};
        default: throw InternalError("a separable cubic cannot have exactly two rational roots");
    }
}

ZetaCoeffs zeta_coeffs(const Curve& curve, std::size_t m) {
    if (m == 0) throw DomainError("need at least one coefficient");
    check_coefficients(curve);
    ZetaCoeffs z{m, std::vector<std::int64_t>(m, 0)};
    z.values[0] = 1;
    // Smallest-prime-factor sieve.
    std::vector<std::uint32_t> spf(m + 1, 0);
    for (std::size_t i = 2; i <= m; ++i) {
        if (spf[i]) continue;
        for (std::size_t j = i; j <= m; j += i) {
            if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    for (std::size_t n = 2; n <= m; ++n) {
        const std::size_t p = spf[n];
        std::size_t power = p;
        std::size_t rest = n / p;
        while (rest % p == 0) {
            power *= p;
            rest /= p;
        }
        std::int64_t& out = z.values[n - 1];
        if (rest != 1) {
            out = z.values[power - 1] * z.values[rest - 1];
        } else if (power == p) {
            out = is_good_prime(curve, p) ? frobenius_trace(curve, p) : bad_prime_coefficient(curve, p);
        } else {
            const std::int64_t ap = z.values[p - 1];
            const std::int64_t prev = z.values[power / p - 1];
            if (is_good_prime(curve, p)) {
                const std::int64_t prev2 = z.values[power / p / p - 1];
                out = ap * prev - static_cast<std::int64_t>(p) * prev2;
            } else {
                out = ap * prev;
            }
        }
    }
    return z;
}

DensityReport density_scan(const Curve& curve, std::uint64_t bound, unsigned workers) {
    if (bound < 100) throw DomainError("density scan bound must be at least 100");
    if (bound >= (std::uint64_t{1} << 32)) throw DomainError("density scan bound must be < 2^32");
    DensityReport report;
    report.bound = bound;
    std::vector<std::uint64_t> good;
    for (auto p : arith::primes_up_to(static_cast<std::uint32_t>(bound))) {
        if (is_good_prime(curve, p)) {
            good.push_back(p);
        } else {
            report.excluded_bad_primes.push_back(p);
        }
    }
    report.primes_scanned = good.size();

    // Interleaved partition keeps the work balanced; each slot is written by
    // exactly one worker and read after join, so aggregation is order-free.
    std::vector<std::uint8_t> odd(good.size(), 0);
    workers = std::max(1U, workers);
    auto scan = [&](unsigned w) {
        for (std::size_t i = w; i < good.size(); i += workers) {
            odd[i] = static_cast<std::uint8_t>(frobenius_trace(curve, good[i]) & 1);
        }
    };
    if (workers == 1) {
        scan(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
    }
    for (std::size_t i = 0; i < good.size(); ++i) {
        if (!odd[i]) continue;
        ++report.odd_count;
        if (report.odd_primes.size() < kMaxListedOddPrimes) report.odd_primes.push_back(good[i]);
    }
    report.even_count = report.primes_scanned - report.odd_count;
    report.even_fraction = report.primes_scanned
                               ? static_cast<double>(report.even_count) / static_cast<double>(report.primes_scanned)
                               : 0.0;
    return report;
}

PngOutput png_elliptic(std::uint64_t seed, std::size_t n_bits) {
    if (n_bits == 0) throw DomainError("png_elliptic needs at least one output bit");
    PngOutput out;
    Rng rng(seed);
    for (;;) {
        ++out.curves_tried;
        const Curve c{rng.between(-kPngCoefficientRange, kPngCoefficientRange),
                      rng.between(-kPngCoefficientRange, kPngCoefficientRange)};
        if (c.discriminant() == 0) continue;
        if (cubic_degree(c.a, c.b).d == 6) {
            out.curve = c;
            break;
        }
    }
    out.bits.reserve(n_bits);
    // Sieve far enough for n_bits good primes, growing if bad primes eat into it.
    double n = static_cast<double>(n_bits) + 16.0;
    auto limit = static_cast<std::uint32_t>(n * (std::log(n) + std::log(std::log(n)) + 2.0));
    std::uint64_t last = 2;
    while (out.bits.size() < n_bits) {
        for (auto p : arith::primes_up_to(limit)) {
            if (p <= last) continue;
            last = p;
            if (!is_good_prime(out.curve, p)) continue;
            out.bits.push_back(static_cast<std::uint8_t>(frobenius_trace(out.curve, p) & 1));
            if (out.bits.size() == n_bits) break;
        }
        limit *= 2;
    }
    return out;
}

}  // namespace qlab::ec
