#pragma once

// Plumbing shared by the broadcast protocols: transcript timestamps,
// payload encodings and the clock synchronisation opening.

#include <string>
#include <vector>

#include "qlab/broadcast.hpp"
#include "qlab/keyexchange.hpp"
#include "qlab/teleport.hpp"
#include "qlab/transcript.hpp"

namespace qlab::session {

using clocksync::Nanos;

/// Picoseconds, two's complement for pre-epoch instants.
std::string time_payload(Nanos t);

/// (bit_z, bit_x) per teleported qubit, packed as bits.
std::string bell_payload(const std::vector<teleport::BellOutcome>& outcomes);

// Advances a fixed spacing per message.
class SessionClock {
public:
    explicit SessionClock(Nanos start) : now_(start) {}
    Nanos tick();

private:
    Nanos now_;
};

struct SyncOutcome {
    Nanos estimate;
    Nanos residual;
};

/// Runs the synchronisation on rng.fork(1) and records it.
SyncOutcome synchronise(const broadcast::Receiver& alice, const broadcast::Receiver& bob,
                        const kex::SyncSettings& sync, Transcript& transcript, SessionClock& clock,
                        Rng& rng);

}  // namespace qlab::session
