#pragma once

// Coin flipping by telephone with elliptic-curve parity trials.
//
//   1. Alice picks a private curve whose cubic has a degree-6 splitting
//      field and whose discriminant 4a^3 + 27b^2 lies in [B, 2B], and
//      publishes v = (a(1), ..., a(m)) with m = floor((log2 B)^k).
//   2. Bob picks random primes m < p < p'.
//   3. Alice reports (a(p) mod 2, a(p') mod 2): (1,0) is heads, (0,1) tails,
//      anything else sends the parties back to step 2.
//   4. Alice reveals the curve; Bob recomputes v and every trial.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/ecurve.hpp"
#include "qlab/rng.hpp"
#include "qlab/transcript.hpp"

namespace qlab::coinflip {

enum class Verdict { Heads, Tails, Retry, Undecided };

const char* to_string(Verdict v) noexcept;

/// (1,0) heads, (0,1) tails, otherwise retry.
Verdict verdict_for(int parity_p, int parity_p_prime) noexcept;

struct Trial {
    std::uint64_t p{0};
    std::uint64_t p_prime{0};
    int parity_p{0};
    int parity_p_prime{0};
    Verdict verdict{Verdict::Retry};
    bool bad_prime{false};  // a challenge prime divides the discriminant
};

struct CoinFlipSession {
    std::int64_t B{0};
    unsigned k{3};
    std::size_t m{0};
    ec::Curve curve;  // Alice's secret until the reveal
    ec::ZetaCoeffs v;
    std::vector<Trial> rounds;
    std::size_t curves_tried{0};
};

inline constexpr std::uint64_t kDefaultChallengeFactor = 10;
inline constexpr std::size_t kDefaultSearchBudget = 200000;

/// floor((log2 B)^k).
std::size_t commitment_length(std::int64_t B, unsigned k);

/// True if the curve meets Alice's step-1 constraints for this B.
bool qualifies(const ec::Curve& curve, std::int64_t B);

/// Seeded search for a qualifying curve; throws ResourceError when the
/// budget runs out.
CoinFlipSession alice_setup(std::int64_t B, unsigned k, Rng& rng,
                            std::size_t search_budget = kDefaultSearchBudget);

/// Two distinct primes drawn uniformly from (m, factor * m], ascending.
std::pair<std::uint64_t, std::uint64_t> bob_choose_primes(std::size_t m, Rng& rng,
                                                          std::uint64_t factor = kDefaultChallengeFactor);

/// Alice's step 3 on her private curve.
Trial run_trial(const CoinFlipSession& session, std::uint64_t p, std::uint64_t p_prime);

struct Verification {
    bool ok{false};
    std::optional<std::size_t> first_divergence;  // coefficient index n, or trial index
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

/// Bob's step 4: everything he holds (B, k, committed v, reported trials)
/// checked against the announced curve.
Verification bob_verify(const CoinFlipSession& committed, const ec::Curve& announced);

struct SessionOutcome {
    Verdict verdict{Verdict::Undecided};
    CoinFlipSession session;
    Transcript transcript;
    Verification verification;
};

/// Steps 1-4 with at most max_rounds challenge rounds.
SessionOutcome run_session(std::int64_t B, unsigned k, std::size_t max_rounds, Rng& rng,
                           std::uint64_t factor = kDefaultChallengeFactor);

}  // namespace qlab::coinflip
