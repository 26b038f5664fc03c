#include "qlab/coinflip.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/arith.hpp"
#include "qlab/bits.hpp"
#include "qlab/errors.hpp"

namespace qlab::coinflip {

namespace {

std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Zigzag LEB128 varints, hex encoded.
std::string encode_coefficients(const std::vector<std::int64_t>& values) {
    std::vector<std::uint8_t> bytes;
    for (auto v : values) {
        std::uint64_t z = zigzag(v);
        do {
            std::uint8_t byte = z & 0x7F;
            z >>= 7;
            if (z) byte |= 0x80;
            bytes.push_back(byte);
        } while (z);
    }
    return bytes_to_hex(bytes);
}

std::string signed_pair(std::int64_t x, std::int64_t y) {
    return u64_to_hex(zigzag(x)) + ":" + u64_to_hex(zigzag(y));
}

int parity(std::int64_t v) { return static_cast<int>(v & 1); }

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Heads: return "heads";
        case Verdict::Tails: return "tails";
        case Verdict::Retry: return "retry";
        case Verdict::Undecided: return "undecided";
    }
    return "?";
}

Verdict verdict_for(int parity_p, int parity_p_prime) noexcept {
    if (parity_p == 1 && parity_p_prime == 0) return Verdict::Heads;
    if (parity_p == 0 && parity_p_prime == 1) return Verdict::Tails;
    return Verdict::Retry;
}

std::size_t commitment_length(std::int64_t B, unsigned k) {
    if (B < 2) throw DomainError("B must be at least 2");
    const double m = std::pow(std::log2(static_cast<double>(B)), static_cast<double>(k));
    // Exact powers such as (log2 1024)^3 = 1000 must not round down.
    return static_cast<std::size_t>(std::floor(m * (1.0 + 1e-12)));
}

bool qualifies(const ec::Curve& curve, std::int64_t B) {
    const std::int64_t d = curve.discriminant();
    if (d < B || d > 2 * B) return false;
    return ec::cubic_degree(curve.a, curve.b).d == 6;
}

CoinFlipSession alice_setup(std::int64_t B, unsigned k, Rng& rng, std::size_t search_budget) {
    if (B < 16) throw DomainError("B must be at least 16");
    if (k < 3) throw DomainError("k must be at least 3");
    if (2 * B > std::int64_t{1} << 40) throw DomainError("B beyond desk scale");
    CoinFlipSession s;
    s.B = B;
    s.k = k;
    s.m = commitment_length(B, k);

    // a ranges over [-a_max, a_max]; for each a the admissible |b| satisfy
    // B - 4a^3 <= 27 b^2 <= 2B - 4a^3.
    const auto a_max = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(B))));
    for (std::size_t attempt = 0; attempt < search_budget; ++attempt) {
        ++s.curves_tried;
        const std::int64_t a = rng.between(-a_max, a_max);
        const __int128 lo = static_cast<__int128>(B) - __int128{4} * a * a * a;
        const __int128 hi = static_cast<__int128>(2 * B) - __int128{4} * a * a * a;
        if (hi < 0) continue;
        std::vector<std::int64_t> candidates;
        auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(std::max<__int128>(lo, 0) / 27)));
        b = std::max<std::int64_t>(0, b - 1);
        for (; __int128{27} * b * b <= hi; ++b) {
            if (__int128{27} * b * b < lo) continue;
            candidates.push_back(b);
            if (b != 0) candidates.push_back(-b);
        }
        if (candidates.empty()) continue;
        const ec::Curve c{a, candidates[rng.below(candidates.size())]};
        if (std::llabs(c.b) > ec::kMaxCoefficient || !qualifies(c, B)) continue;
        s.curve = c;
        s.v = ec::zeta_coeffs(c, s.m);
        return s;
    }
    throw ResourceError("no qualifying curve within the search budget; enlarge B");
}

std::pair<std::uint64_t, std::uint64_t> bob_choose_primes(std::size_t m, Rng& rng,
                                                          std::uint64_t factor) {
    if (m == 0) throw DomainError("m must be at least 1");
    if (factor < 2) throw DomainError("challenge range factor must be at least 2");
    const auto primes = arith::primes_up_to(static_cast<std::uint32_t>(factor * m));
    const auto first = std::upper_bound(primes.begin(), primes.end(), static_cast<std::uint32_t>(m));
    const auto count = static_cast<std::uint64_t>(primes.end() - first);
    if (count < 2) throw DomainError("fewer than two primes in the challenge range");
    const std::uint64_t i = rng.below(count);
    std::uint64_t j = rng.below(count - 1);
    if (j >= i) ++j;
    const std::uint64_t x = first[static_cast<std::ptrdiff_t>(i)];
    const std::uint64_t y = first[static_cast<std::ptrdiff_t>(j)];
    return {std::min(x, y), std::max(x, y)};
}

Trial run_trial(const CoinFlipSession& session, std::uint64_t p, std::uint64_t p_prime) {
    if (!(session.m < p && p < p_prime)) throw DomainError("challenge primes must satisfy m < p < p'");
    if (!arith::is_prime(p) || !arith::is_prime(p_prime)) throw DomainError("challenges must be prime");
    Trial t{p, p_prime, 0, 0, Verdict::Retry, false};
    if (!ec::is_good_prime(session.curve, p) || !ec::is_good_prime(session.curve, p_prime)) {
        t.bad_prime = true;
        return t;
    }
    t.parity_p = parity(ec::frobenius_trace(session.curve, p));
    t.parity_p_prime = parity(ec::frobenius_trace(session.curve, p_prime));
    t.verdict = verdict_for(t.parity_p, t.parity_p_prime);
    return t;
}

Verification bob_verify(const CoinFlipSession& committed, const ec::Curve& announced) {
    if (std::llabs(announced.a) > ec::kMaxCoefficient || std::llabs(announced.b) > ec::kMaxCoefficient ||
        announced.discriminant() == 0) {
        return {false, std::nullopt, "announced curve is singular or out of range"};
    }
    if (!qualifies(announced, committed.B)) {
        return {false, std::nullopt, "announced curve violates the setup constraints"};
    }
    if (committed.v.values.size() != committed.m) {
        return {false, std::nullopt, "committed vector has the wrong length"};
    }
    const auto v = ec::zeta_coeffs(announced, committed.m);
    for (std::size_t n = 1; n <= committed.m; ++n) {
        if (v.at(n) != committed.v.at(n)) return {false, n, "committed coefficient mismatch"};
    }
    CoinFlipSession check = committed;
    check.curve = announced;
    for (std::size_t i = 0; i < committed.rounds.size(); ++i) {
        const Trial& reported = committed.rounds[i];
        const Trial redo = run_trial(check, reported.p, reported.p_prime);
        if (redo.parity_p != reported.parity_p || redo.parity_p_prime != reported.parity_p_prime ||
            redo.verdict != reported.verdict || redo.bad_prime != reported.bad_prime) {
            return {false, i, "trial mismatch"};
        }
    }
    return {true, std::nullopt, ""};
}

SessionOutcome run_session(std::int64_t B, unsigned k, std::size_t max_rounds, Rng& rng,
                           std::uint64_t factor) {
    if (max_rounds == 0) throw DomainError("max_rounds must be at least 1");
    SessionOutcome out;
    Transcript& t = out.transcript;
    clocksync::Nanos now{0.0};
    const clocksync::Nanos spacing{1e6};
    auto tick = [&] {
        const auto stamp = now;
        now += spacing;
        return stamp;
    };

    auto alice_rng = rng.fork(1);
    auto bob_rng = rng.fork(2);
    out.session = alice_setup(B, k, alice_rng);
    auto& s = out.session;
    t.send("v", "alice", "bob", Channel::Public, encode_coefficients(s.v.values), tick());

    for (std::size_t round = 0; round < max_rounds; ++round) {
        const auto [p, p_prime] = bob_choose_primes(s.m, bob_rng, factor);
        t.send("primes", "bob", "alice", Channel::Public, u64_to_hex(p) + ":" + u64_to_hex(p_prime), tick());
        const Trial trial = run_trial(s, p, p_prime);
        s.rounds.push_back(trial);
        t.send("trial", "alice", "bob", Channel::Public,
               std::to_string(trial.parity_p) + std::to_string(trial.parity_p_prime), tick());
        if (trial.bad_prime) t.note("round " + std::to_string(round) + ": challenge prime divides the discriminant");
        if (trial.verdict != Verdict::Retry) {
            out.verdict = trial.verdict;
            break;
        }
    }
    if (out.verdict == Verdict::Undecided) t.note("max rounds exhausted without a decision");

    t.send("reveal", "alice", "bob", Channel::Public, signed_pair(s.curve.a, s.curve.b), tick());
    out.verification = bob_verify(s, s.curve);
    t.note(std::string("verdict ") + to_string(out.verdict) + ", verify " + (out.verification ? "ok" : "failed"));
    return out;
}

}  // namespace qlab::coinflip
