#include "qlab/qstate.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qlab/errors.hpp"

namespace qlab::qstate {

namespace {

constexpr double kZeroBranch = 1e-15;

}  // namespace

Gate inverse(const Gate& g) {
    if (g.kind == GateKind::Phase) return Gate::phase(g.target, -g.theta);
    return g;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t basis_index,
                               std::size_t cap) {
    if (n_qubits > cap || n_qubits >= 63) {
        throw ResourceError("qubit count " + std::to_string(n_qubits) + " exceeds cap " +
                            std::to_string(cap));
    }
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    if (basis_index >= dim) {
        throw DomainError("basis index " + std::to_string(basis_index) + " out of range for " +
                          std::to_string(n_qubits) + " qubits");
    }
    std::vector<Amplitude> amps(dim);
    amps[basis_index] = 1.0;
    return {n_qubits, std::move(amps)};
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    if (amplitudes.empty() || !std::has_single_bit(amplitudes.size())) {
        throw DomainError("amplitude vector length must be a power of two");
    }
    double norm = 0.0;
    for (const auto& a : amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw DomainError("amplitude vector is not normalized");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
    return {n, std::move(amplitudes)};
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void StateVector::check_qubit(std::size_t q) const {
    if (q >= n_qubits_) {
        throw DomainError("qubit " + std::to_string(q) + " out of range for " +
                          std::to_string(n_qubits_) + "-qubit state");
    }
}

double StateVector::probability_one(std::size_t qubit) const {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) p += std::norm(amps_[i]);
    }
    return p;
}

void StateVector::apply(const Gate& gate) {
    check_qubit(gate.target);
    const std::size_t t = std::size_t{1} << gate.target;
    switch (gate.kind) {
        case GateKind::H: {
            const double s = std::numbers::sqrt2 / 2.0;
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if (i & t) continue;
                const Amplitude a0 = amps_[i];
                const Amplitude a1 = amps_[i | t];
                amps_[i] = s * (a0 + a1);
                amps_[i | t] = s * (a0 - a1);
            }
            break;
        }
        case GateKind::X:
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if (!(i & t)) std::swap(amps_[i], amps_[i | t]);
            }
            break;
        case GateKind::Z:
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if (i & t) amps_[i] = -amps_[i];
            }
            break;
        case GateKind::Phase: {
            if (!std::isfinite(gate.theta)) throw DomainError("phase angle must be finite");
            const Amplitude w = std::polar(1.0, gate.theta);
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if (i & t) amps_[i] *= w;
            }
            break;
        }
        case GateKind::CNOT: {
            check_qubit(gate.control);
            if (gate.control == gate.target) {
                throw DomainError("CNOT control and target must differ");
            }
            const std::size_t c = std::size_t{1} << gate.control;
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if ((i & c) && !(i & t)) std::swap(amps_[i], amps_[i | t]);
            }
            break;
        }
    }
}

double StateVector::collapse(std::size_t qubit, int outcome) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t keep = outcome ? mask : 0;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == keep) p += std::norm(amps_[i]);
    }
    if (p < kZeroBranch) {
        throw InternalError("projection onto a zero-probability branch");
    }
    const double scale = 1.0 / std::sqrt(p);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] = ((i & mask) == keep) ? amps_[i] * scale : Amplitude{};
    }
    return p;
}

StateVector new_basis_state(std::size_t n_qubits, std::uint64_t basis_index, std::size_t cap) {
    return StateVector::basis(n_qubits, basis_index, cap);
}

StateVector apply_gate(StateVector state, const Gate& gate) {
    state.apply(gate);
    return state;
}

Measured measure_qubit(StateVector state, std::size_t qubit, Rng& rng) {
    const double p1 = state.probability_one(qubit);
    int outcome = rng.uniform01() < p1 ? 1 : 0;
    // Rounding residue must never select a zero-weight branch.
    if (p1 < kZeroBranch) outcome = 0;
    if (1.0 - p1 < kZeroBranch) outcome = 1;
    const double p = state.collapse(qubit, outcome);
    return {MeasurementRecord{qubit, outcome, p}, std::move(state)};
}

double fidelity(const StateVector& s1, const StateVector& s2) {
    if (s1.n_qubits() != s2.n_qubits()) {
        throw DomainError("fidelity of states with different qubit counts");
    }
    Amplitude inner{};
    for (std::size_t i = 0; i < s1.dimension(); ++i) inner += std::conj(s1[i]) * s2[i];
    return std::min(1.0, std::norm(inner));
}

}  // namespace qlab::qstate
