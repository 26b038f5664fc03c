#include "qlab/keyexchange.hpp"

#include <cmath>
#include <string>

#include "qlab/errors.hpp"
#include "qlab/teleport.hpp"
#include "session.hpp"

namespace qlab::kex {

using session::bell_payload;
using session::SessionClock;
using session::synchronise;
using session::time_payload;

using broadcast::BroadcastSource;
using broadcast::KeyWindow;
using broadcast::Receiver;

namespace {

constexpr std::size_t kMaxRetries = 64;

std::uint64_t parse_hex_u64(const std::string& hex) { return std::stoull(hex, nullptr, 16); }

const Message& require_public(const Transcript& t, const std::string& step) {
    const Message* m = t.find_public(step);
    if (!m) throw DomainError("eve view has no public '" + step + "' message");
    return *m;
}

std::uint64_t read_group_element(const BroadcastSource& source, std::int64_t index,
                                 std::size_t width, std::uint64_t p) {
    return bits_to_u64_lsb_first(source.bits(index, width)) % p;
}

// False when every single-bit flip of g lands on 0 mod p (tiny p only).
bool has_usable_flip(std::uint64_t g, std::size_t width, std::uint64_t p) {
    for (std::size_t n = 0; n < width; ++n) {
        if (flip_bit(g, static_cast<unsigned>(n)) % p != 0) return true;
    }
    return false;
}

}  // namespace

void DhParams::validate() const {
    if (!arith::is_prime(p)) throw DomainError("DH modulus " + std::to_string(p) + " is not prime");
    if (g < 1 || g > p - 1) throw DomainError("DH base must lie in [1, p-1]");
}

PartySecret PartySecret::random(std::uint64_t p, Rng& rng) {
    if (p < 3) throw DomainError("modulus too small for a secret exponent");
    return {1 + rng.below(p - 1)};
}

DhResult dh_classic(const DhParams& params, PartySecret a, PartySecret b) {
    params.validate();
    for (auto e : {a.exponent, b.exponent}) {
        if (e < 1 || e > params.p - 1) throw DomainError("secret exponent outside [1, p-1]");
    }
    const std::uint64_t big_a = modexp(params.g, a.exponent, params.p);
    const std::uint64_t big_b = modexp(params.g, b.exponent, params.p);

    Transcript t;
    SessionClock clock{Nanos{0.0}};
    t.send("p", "alice", "bob", Channel::Public, u64_to_hex(params.p), clock.tick());
    t.send("g", "alice", "bob", Channel::Public, u64_to_hex(params.g), clock.tick());
    t.send("A", "alice", "bob", Channel::Public, u64_to_hex(big_a), clock.tick());
    t.send("B", "bob", "alice", Channel::Public, u64_to_hex(big_b), clock.tick());

    const std::uint64_t k_a = modexp(big_b, a.exponent, params.p);
    const std::uint64_t k_b = modexp(big_a, b.exponent, params.p);
    return {SharedKey{k_a}, SharedKey{k_b}, std::move(t)};
}

PqDhResult pq_dh(const BroadcastSource& source, const Receiver& alice, const Receiver& bob,
                 KeyWindow window, std::uint64_t p, PartySecret a, PartySecret b,
                 const SyncSettings& sync, Rng& rng) {
    if (!arith::is_prime(p) || p < 3) throw DomainError("pq_dh modulus must be an odd prime");
    const std::size_t width = arith::bit_width_mod(p);
    if (window.length != width) {
        throw DomainError("pq_dh window must be ceil(log2 p) = " + std::to_string(width) + " bits");
    }
    for (auto e : {a.exponent, b.exponent}) {
        if (e < 1 || e > p - 1) throw DomainError("secret exponent outside [1, p-1]");
    }

    PqDhResult out;
    Transcript& t = out.transcript;
    SessionClock clock{alice.clock.global(window.start_local_time) - Nanos{1e6}};

    // Clock synchronisation.
    const auto synced = synchronise(alice, bob, sync, t, clock, rng);
    out.sync_residual = synced.residual;

    // Announce a mid-bit start time and p; both read g off the stream.
    std::int64_t alice_index = broadcast::reception_index(source, alice, window.start_local_time);
    std::uint64_t g_a = 0;
    Nanos start{};
    for (std::size_t attempt = 0;; ++attempt) {
        if (attempt > kMaxRetries) throw ResourceError("no usable group element in broadcast");
        start = broadcast::local_time_for_index(source, alice, alice_index);
        t.send("t", alice.label, bob.label, Channel::Public, time_payload(start), clock.tick());
        t.send("window", "satellite", "*", Channel::Broadcast, u64_to_hex(width), clock.tick());
        g_a = read_group_element(source, alice_index, width, p);
        if (g_a != 0 && has_usable_flip(g_a, width, p)) break;
        t.note("no usable group element in window; re-windowing");
        alice_index += static_cast<std::int64_t>(width);
        ++out.retries;
    }
    t.send("p", alice.label, bob.label, Channel::Public, u64_to_hex(p), clock.tick());

    const Nanos bob_start = broadcast::compensated_start(alice, bob, start, synced.estimate);
    const std::int64_t bob_index = broadcast::reception_index(source, bob, bob_start);
    const std::uint64_t g_b = read_group_element(source, bob_index, width, p);

    // Teleport the flip position.
    auto tele_rng = rng.fork(2);
    const std::size_t index_qubits = teleport::index_width(width);
    std::uint64_t n = 0;
    std::uint64_t n_b = 0;
    std::uint64_t g1_a = 0;
    for (std::size_t attempt = 0;; ++attempt) {
        if (attempt > kMaxRetries) throw ResourceError("every flipped base was 0 mod p");
        n = tele_rng.below(width);
        const auto sent = teleport::teleport_index_traced(n, index_qubits, tele_rng);
        t.send("flip-index", alice.label, bob.label, Channel::Quantum, bell_payload(sent.outcomes),
               clock.tick());
        n_b = sent.value;
        g1_a = flip_bit(g_a, static_cast<unsigned>(n));
        if (g1_a % p != 0) break;
        t.note("g1 = 0 mod p; re-teleporting flip index");
        t.send("retry", alice.label, bob.label, Channel::Public, "", clock.tick());
        ++out.retries;
    }
    const std::uint64_t g1_b = n_b < 64 ? flip_bit(g_b, static_cast<unsigned>(n_b)) : g_b;

    // DH over g1.
    const std::uint64_t big_a = modexp(g1_a, a.exponent, p);
    const std::uint64_t big_b = modexp(g1_b, b.exponent, p);
    t.send("A", alice.label, bob.label, Channel::Public, u64_to_hex(big_a), clock.tick());
    t.send("B", bob.label, alice.label, Channel::Public, u64_to_hex(big_b), clock.tick());
    const std::uint64_t k_a = modexp(big_b, a.exponent, p);
    const std::uint64_t k_b = modexp(big_a, b.exponent, p);

    out.agreed = k_a == k_b;
    if (!out.agreed) {
        t.note("key-mismatch: sync residual " + format_nanos(synced.residual) + " ns vs bit period " +
               format_nanos(source.bit_period()) + " ns");
    }
    // The keys are single-use.
    t.note("keys vanish after use");
    out.alice_key = SharedKey{k_a};
    out.bob_key = SharedKey{k_b};
    out.alice_private = {g_a, g1_a, n};
    out.bob_private = {g_b, g1_b, n_b};
    return out;
}

PrivateResult private_exchange(const BroadcastSource& source, const Receiver& alice,
                               const Receiver& bob, const SlotSchedule& schedule,
                               std::size_t key_length, const SyncSettings& sync, Rng& rng) {
    if (key_length == 0) throw DomainError("key length must be positive");
    if (schedule.slot_count == 0 || schedule.slot_bits == 0) {
        throw DomainError("slot schedule must have at least one nonempty slot");
    }
    PrivateResult out;
    Transcript& t = out.transcript;
    SessionClock clock{alice.clock.global(schedule.origin) - Nanos{1e6}};

    // Clock synchronisation.
    const auto synced = synchronise(alice, bob, sync, t, clock, rng);
    out.sync_residual = synced.residual;

    // The coarse schedule is public; which slot is used is not.
    const std::int64_t origin_index = broadcast::reception_index(source, alice, schedule.origin);
    const Nanos origin = broadcast::local_time_for_index(source, alice, origin_index);
    t.send("schedule", alice.label, bob.label, Channel::Public,
           time_payload(origin) + ":" + u64_to_hex(schedule.slot_bits) + ":" +
               u64_to_hex(schedule.slot_count),
           clock.tick());

    // Teleport the slot.
    auto tele_rng = rng.fork(2);
    out.slot = tele_rng.below(schedule.slot_count);
    const auto sent = teleport::teleport_index_traced(
        out.slot, teleport::index_width(schedule.slot_count), tele_rng);
    t.send("slot", alice.label, bob.label, Channel::Quantum, bell_payload(sent.outcomes), clock.tick());

    const auto slot_offset = [&](std::uint64_t slot) {
        return source.bit_period() * static_cast<double>(slot * schedule.slot_bits);
    };
    const Nanos alice_start = origin + slot_offset(out.slot);
    const Nanos bob_start =
        broadcast::compensated_start(alice, bob, origin + slot_offset(sent.value), synced.estimate);
    t.send("window", "satellite", "*", Channel::Broadcast, u64_to_hex(key_length), clock.tick());

    out.alice_start_index = broadcast::reception_index(source, alice, alice_start);
    Bits key_a = broadcast::extract_key(source, alice, {alice_start, key_length});
    Bits key_b = broadcast::extract_key(source, bob, {bob_start, key_length});
    out.agreed = key_a == key_b;
    if (!out.agreed) t.note("key-mismatch");

    // The keys are single-use.
    t.note("keys vanish after use");
    out.alice_key = BitKey{std::move(key_a)};
    out.bob_key = BitKey{std::move(key_b)};
    return out;
}

std::optional<std::uint64_t> brute_force_dlog(std::uint64_t base, std::uint64_t target,
                                              std::uint64_t p, std::uint64_t* work) {
    std::uint64_t acc = 1;
    for (std::uint64_t x = 1; x < p; ++x) {
        acc = arith::mulmod(acc, base, p);
        if (work) ++*work;
        if (acc == target) return x;
    }
    return std::nullopt;
}

std::optional<std::uint64_t> classical_eve_dh(const Transcript& transcript) {
    const std::uint64_t p = parse_hex_u64(require_public(transcript, "p").payload_hex);
    const std::uint64_t g = parse_hex_u64(require_public(transcript, "g").payload_hex);
    const std::uint64_t big_a = parse_hex_u64(require_public(transcript, "A").payload_hex);
    const std::uint64_t big_b = parse_hex_u64(require_public(transcript, "B").payload_hex);
    const auto a = brute_force_dlog(g, big_a, p);
    if (!a) return std::nullopt;
    return modexp(big_b, *a, p);
}

EveCandidates classical_eve_pqdh(const Transcript& transcript) {
    if (transcript.find_public("g")) throw DomainError("unexpected public base in teleport variant");
    const std::uint64_t p = parse_hex_u64(require_public(transcript, "p").payload_hex);
    const std::uint64_t big_a = parse_hex_u64(require_public(transcript, "A").payload_hex);
    const std::uint64_t big_b = parse_hex_u64(require_public(transcript, "B").payload_hex);
    EveCandidates out;
    const std::uint64_t span = std::uint64_t{1} << arith::bit_width_mod(p);
    for (std::uint64_t candidate = 1; candidate < span; ++candidate) {
        if (candidate % p == 0) continue;
        ++out.candidates_tried;
        if (auto a = brute_force_dlog(candidate % p, big_a, p, &out.work)) {
            out.keys.insert(modexp(big_b, *a, p));
        }
    }
    return out;
}

}  // namespace qlab::kex
