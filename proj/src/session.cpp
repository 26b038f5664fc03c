#include "session.hpp"

#include <cmath>

namespace qlab::session {

namespace {
const Nanos kMessageSpacing{1000.0};
}

std::string time_payload(Nanos t) {
    return u64_to_hex(static_cast<std::uint64_t>(std::llround(t.count() * 1000.0)));
}

std::string bell_payload(const std::vector<teleport::BellOutcome>& outcomes) {
    Bits bits;
    for (const auto& o : outcomes) {
        bits.push_back(static_cast<std::uint8_t>(o.bit_z));
        bits.push_back(static_cast<std::uint8_t>(o.bit_x));
    }
    return bits_to_hex(bits);
}

Nanos SessionClock::tick() {
    const Nanos t = now_;
    now_ += kMessageSpacing;
    return t;
}

SyncOutcome synchronise(const broadcast::Receiver& alice, const broadcast::Receiver& bob,
                        const kex::SyncSettings& sync, Transcript& transcript, SessionClock& clock,
                        Rng& rng) {
    const Nanos true_delta = bob.clock.offset - alice.clock.offset;
    auto sync_rng = rng.fork(1);
    const auto result =
        clocksync::tqh_sync(true_delta, sync.n_bits, sync.t_max, sync.shots_per_bit, sync_rng);
    transcript.send("sync", alice.label, bob.label, Channel::Quantum, u64_to_hex(result.qubits_used),
                    clock.tick());
    const Nanos residual = result.delta_estimate - true_delta;
    transcript.note("sync qubits=" + std::to_string(result.qubits_used) +
                    " residual_ns=" + format_nanos(residual));
    return {result.delta_estimate, residual};
}

}  // namespace qlab::session
