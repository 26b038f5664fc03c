#include "qlab/teleport.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "qlab/errors.hpp"

namespace qlab::teleport {

using qstate::Gate;
using qstate::StateVector;

namespace {

constexpr double kZeroTolerance = 1e-12;

}  // namespace

StateVector make_epr(StateVector state, std::size_t q1, std::size_t q2) {
    if (q1 == q2) throw DomainError("EPR qubits must be distinct");
    if (state.probability_one(q1) > kZeroTolerance || state.probability_one(q2) > kZeroTolerance) {
        throw PreconditionError("EPR qubits must both start in |0>");
    }
    state.apply(Gate::h(q1));
    state.apply(Gate::cnot(q1, q2));
    return state;
}

BellMeasured bell_measure(StateVector state, std::size_t q_target, std::size_t q_epr, Rng& rng) {
    if (q_target == q_epr) throw DomainError("Bell measurement needs two distinct qubits");
    state.apply(Gate::cnot(q_target, q_epr));
    state.apply(Gate::h(q_target));
    auto z = qstate::measure_qubit(std::move(state), q_target, rng);
    auto x = qstate::measure_qubit(std::move(z.state), q_epr, rng);
    return {BellOutcome{z.record.outcome, x.record.outcome}, std::move(x.state)};
}

std::vector<Gate> corrections_for(BellOutcome outcome, std::size_t qubit) {
    std::vector<Gate> gates;
    if (outcome.bit_x) gates.push_back(Gate::x(qubit));
    if (outcome.bit_z) gates.push_back(Gate::z(qubit));
    return gates;
}

StateVector prepare_register(const StateVector& input) {
    if (input.n_qubits() != 1) throw DomainError("teleport input must be a single qubit");
    std::vector<qstate::Amplitude> amps(8);
    amps[0] = input[0];
    amps[1] = input[1];
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector receiver_qubit(const StateVector& reg, BellOutcome outcome) {
    const std::size_t base = (static_cast<std::size_t>(outcome.bit_z) << kTargetQubit) |
                             (static_cast<std::size_t>(outcome.bit_x) << kSenderEpr);
    const std::size_t r = std::size_t{1} << kReceiverEpr;
    return StateVector::from_amplitudes({reg[base], reg[base | r]});
}

TeleportResult teleport_state(const StateVector& input, Rng& rng) {
    auto reg = make_epr(prepare_register(input), kSenderEpr, kReceiverEpr);
    auto measured = bell_measure(std::move(reg), kTargetQubit, kSenderEpr, rng);
    auto gates = corrections_for(measured.outcome, kReceiverEpr);
    for (const auto& g : gates) measured.state.apply(g);
    auto bob = receiver_qubit(measured.state, measured.outcome);
    const double f = qstate::fidelity(input, bob);
    return {TeleportTranscript{measured.outcome, std::move(gates), f}, std::move(bob)};
}

IndexTeleport teleport_index_traced(std::uint64_t n, std::size_t bit_width, Rng& rng) {
    if (bit_width == 0 || bit_width > 63) {
        throw DomainError("index width must be in [1, 63]");
    }
    if (n >= (std::uint64_t{1} << bit_width)) {
        throw DomainError("index " + std::to_string(n) + " does not fit in " +
                          std::to_string(bit_width) + " qubits");
    }
    IndexTeleport out;
    for (std::size_t k = 0; k < bit_width; ++k) {
        const auto bit = (n >> k) & 1U;
        auto sent = teleport_state(StateVector::basis(1, bit), rng);
        out.outcomes.push_back(sent.transcript.outcome);
        out.min_fidelity = std::min(out.min_fidelity, sent.transcript.fidelity);
        auto read = qstate::measure_qubit(std::move(sent.receiver), 0, rng);
        out.value |= static_cast<std::uint64_t>(read.record.outcome) << k;
    }
    return out;
}

std::uint64_t teleport_index(std::uint64_t n, std::size_t bit_width, Rng& rng) {
    return teleport_index_traced(n, bit_width, rng).value;
}

std::size_t index_width(std::uint64_t count) {
    if (count <= 2) return 1;
    return static_cast<std::size_t>(std::bit_width(count - 1));
}

}  // namespace qlab::teleport
