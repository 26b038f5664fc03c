#pragma once

// Three-stage teleportation over the statevector simulator: EPR preparation,
// Bell measurement at the sender, Pauli correction at the receiver.
//
// Register layout for a single teleport is fixed:
//   qubit 0  the state being teleported
//   qubit 1  sender's half of the EPR pair
//   qubit 2  receiver's half of the EPR pair

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qlab/qstate.hpp"
#include "qlab/rng.hpp"

namespace qlab::teleport {

inline constexpr std::size_t kTargetQubit = 0;
inline constexpr std::size_t kSenderEpr = 1;
inline constexpr std::size_t kReceiverEpr = 2;

/// The two classical bits sent to the receiver.
struct BellOutcome {
    int bit_z{0};  // target qubit after H; selects the Z correction
    int bit_x{0};  // sender's EPR half; selects the X correction

    int index() const noexcept { return bit_z * 2 + bit_x; }
    friend bool operator==(const BellOutcome&, const BellOutcome&) = default;
};

struct TeleportTranscript {
    BellOutcome outcome;
    std::vector<qstate::Gate> corrections_applied;
    double fidelity{0.0};
};

struct TeleportResult {
    TeleportTranscript transcript;
    qstate::StateVector receiver;  // 1 qubit
};

/// Puts q1,q2 into (|00>+|11>)/sqrt2. Both must currently read |0>.
qstate::StateVector make_epr(qstate::StateVector state, std::size_t q1, std::size_t q2);

struct BellMeasured {
    BellOutcome outcome;
    qstate::StateVector state;
};

/// CNOT(target -> epr), H(target), then measure target (bit_z) and epr (bit_x).
BellMeasured bell_measure(qstate::StateVector state, std::size_t q_target, std::size_t q_epr,
                          Rng& rng);

/// Receiver-side corrections, X^bit_x then Z^bit_z, on `qubit`.
std::vector<qstate::Gate> corrections_for(BellOutcome outcome, std::size_t qubit);

/// 3-qubit register holding `input` on the target qubit and |00> elsewhere.
qstate::StateVector prepare_register(const qstate::StateVector& input);

/// Receiver's qubit from a register whose other two qubits have been measured.
qstate::StateVector receiver_qubit(const qstate::StateVector& reg, BellOutcome outcome);

/// Full protocol for a single-qubit input. The sender's qubits end collapsed.
TeleportResult teleport_state(const qstate::StateVector& input, Rng& rng);

struct IndexTeleport {
    std::uint64_t value{0};
    std::vector<BellOutcome> outcomes;  // one per encoded bit, LSB first
    double min_fidelity{1.0};
};

/// Sends n (0 <= n < 2^bit_width) as bit_width independently teleported
/// computational-basis qubits, LSB first, and returns what the receiver
/// reads back together with the classical side-channel bits.
IndexTeleport teleport_index_traced(std::uint64_t n, std::size_t bit_width, Rng& rng);

std::uint64_t teleport_index(std::uint64_t n, std::size_t bit_width, Rng& rng);

/// Qubits needed to carry any value in [0, count); at least 1.
std::size_t index_width(std::uint64_t count);

}  // namespace qlab::teleport
