#pragma once

// Classical Diffie-Hellman over subgroups of Z_p*, the broadcast/teleport
// variant in which the base is drawn from the satellite stream and
// perturbed by a teleported bit flip, and the private exchange in which the
// key-window start itself is teleported.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>

#include "qlab/arith.hpp"
#include "qlab/bits.hpp"
#include "qlab/broadcast.hpp"
#include "qlab/clocksync.hpp"
#include "qlab/rng.hpp"
#include "qlab/transcript.hpp"
#include "qlab/vanishing.hpp"

namespace qlab::kex {

using arith::modexp;
using clocksync::Nanos;

struct DhParams {
    std::uint64_t p{0};
    std::uint64_t g{0};

    /// Throws DomainError unless p is prime and 1 <= g <= p-1.
    void validate() const;
};

/// A party's private exponent in [1, p-1]. Never written to a transcript.
struct PartySecret {
    std::uint64_t exponent{1};

    static PartySecret random(std::uint64_t p, Rng& rng);
};

using SharedKey = Vanishing<std::uint64_t>;
using BitKey = Vanishing<Bits>;

struct DhResult {
    SharedKey alice_key;
    SharedKey bob_key;
    Transcript transcript;
};

DhResult dh_classic(const DhParams& params, PartySecret a, PartySecret b);

/// g with bit n flipped (LSB is bit 0).
constexpr std::uint64_t flip_bit(std::uint64_t g, unsigned n) { return g ^ (std::uint64_t{1} << n); }

/// Settings for the clock synchronisation run that precedes each protocol.
struct SyncSettings {
    std::size_t n_bits{14};
    Nanos t_max{1.6384e6};
    std::size_t shots_per_bit{clocksync::kDefaultShotsPerBit};
};

/// Values one party holds privately at the end of a run; exposed so tests
/// can check they never reach the public channel.
struct PqDhPrivate {
    std::uint64_t g{0};
    std::uint64_t g1{0};
    std::uint64_t n{0};
};

struct PqDhResult {
    SharedKey alice_key;
    SharedKey bob_key;
    Transcript transcript;
    bool agreed{false};
    std::size_t retries{0};
    PqDhPrivate alice_private;
    PqDhPrivate bob_private;
    Nanos sync_residual{0.0};
};

/// Runs sync, announces the start time, extracts g from the broadcast
/// (window.length must equal ceil(log2 p)), teleports a flip index, and
/// completes DH over g1. Re-windows if g = 0 mod p, re-teleports if
/// g1 = 0 mod p.
PqDhResult pq_dh(const broadcast::BroadcastSource& source, const broadcast::Receiver& alice,
                 const broadcast::Receiver& bob, broadcast::KeyWindow window, std::uint64_t p,
                 PartySecret a, PartySecret b, const SyncSettings& sync, Rng& rng);

/// Public coarse schedule for the private exchange: the window may start at
/// any of `slot_count` slots, `slot_bits` stream bits apart, counted from
/// `origin` on the sender's clock.
struct SlotSchedule {
    Nanos origin{0.0};
    std::size_t slot_bits{1024};
    std::size_t slot_count{256};
};

struct PrivateResult {
    BitKey alice_key;
    BitKey bob_key;
    Transcript transcript;
    bool agreed{false};
    std::uint64_t slot{0};  // sender's private choice
    std::int64_t alice_start_index{0};
    Nanos sync_residual{0.0};
};

PrivateResult private_exchange(const broadcast::BroadcastSource& source,
                               const broadcast::Receiver& alice, const broadcast::Receiver& bob,
                               const SlotSchedule& schedule, std::size_t key_length,
                               const SyncSettings& sync, Rng& rng);

/// Brute-force discrete log: smallest x in [1, p-1] with base^x = target.
std::optional<std::uint64_t> brute_force_dlog(std::uint64_t base, std::uint64_t target,
                                              std::uint64_t p, std::uint64_t* work = nullptr);

/// Eavesdropper with unbounded classical compute replaying a classic DH
/// eve_view: solves the discrete log of A and returns B^a.
std::optional<std::uint64_t> classical_eve_dh(const Transcript& transcript);

struct EveCandidates {
    std::set<std::uint64_t> keys;  // distinct keys consistent with the view
    std::uint64_t candidates_tried{0};
    std::uint64_t work{0};  // group multiplications spent
};

/// The same eavesdropper against the teleport variant: g1 is absent, so she
/// enumerates every candidate base and collects all consistent keys.
EveCandidates classical_eve_pqdh(const Transcript& transcript);

}  // namespace qlab::kex
