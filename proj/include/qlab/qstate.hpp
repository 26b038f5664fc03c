#pragma once

// Exact dense statevector simulator over a handful of qubits.
//
// Qubit 0 is the least significant bit of the basis index: basis state
// |q_{n-1} ... q_1 q_0> has index sum(q_k << k).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qlab/rng.hpp"

namespace qlab::qstate {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kDefaultQubitCap = 24;
inline constexpr double kNormTolerance = 1e-9;

enum class GateKind { H, X, Z, Phase, CNOT };

struct Gate {
    GateKind kind{GateKind::H};
    std::size_t target{0};
    std::size_t control{0};  // CNOT only
    double theta{0.0};       // Phase only, radians

    static Gate h(std::size_t q) { return {GateKind::H, q, 0, 0.0}; }
    static Gate x(std::size_t q) { return {GateKind::X, q, 0, 0.0}; }
    static Gate z(std::size_t q) { return {GateKind::Z, q, 0, 0.0}; }
    /// diag(1, e^{i theta}) on qubit q.
    static Gate phase(std::size_t q, double theta) { return {GateKind::Phase, q, 0, theta}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control, 0.0};
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// The gate undoing `g`. Every gate in the set is self-inverse except Phase.
Gate inverse(const Gate& g);

class StateVector {
public:
    /// |basis_index> over n_qubits. Throws DomainError on a bad index and
    /// ResourceError when n_qubits exceeds `cap`.
    static StateVector basis(std::size_t n_qubits, std::uint64_t basis_index,
                             std::size_t cap = kDefaultQubitCap);

    /// Takes ownership of explicit amplitudes. Length must be a power of two
    /// and the vector must be normalized within kNormTolerance.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const noexcept;

    /// Born probability that `qubit` reads 1.
    double probability_one(std::size_t qubit) const;

    /// In-place gate application; the free function below is the pure form.
    void apply(const Gate& gate);

    /// Projects `qubit` onto `outcome` and renormalizes. Returns the branch
    /// probability. Throws InternalError if the branch has (numerically)
    /// zero weight.
    double collapse(std::size_t qubit, int outcome);

private:
    StateVector(std::size_t n, std::vector<Amplitude> amps)
        : n_qubits_(n), amps_(std::move(amps)) {}

    void check_qubit(std::size_t q) const;

    std::size_t n_qubits_;
    std::vector<Amplitude> amps_;
};

struct MeasurementRecord {
    std::size_t qubit{0};
    int outcome{0};
    double probability{0.0};
};

struct Measured {
    MeasurementRecord record;
    StateVector state;
};

StateVector new_basis_state(std::size_t n_qubits, std::uint64_t basis_index,
                            std::size_t cap = kDefaultQubitCap);

StateVector apply_gate(StateVector state, const Gate& gate);

Measured measure_qubit(StateVector state, std::size_t qubit, Rng& rng);

/// |<s1|s2>|^2. Throws DomainError on a qubit-count mismatch.
double fidelity(const StateVector& s1, const StateVector& s2);

}  // namespace qlab::qstate
