#pragma once

// Clock-offset estimation with ticking qubits.
//
// A ticking qubit precesses at a fixed angular rate, so the relative phase
// between |0> and |1> encodes elapsed time. The sender starts one qubit per
// frequency level at its local zero; the receiver measures it at a known
// local reading. Level k ticks at 2*pi*2^k / t_max, so level 0 fixes the
// offset to within a half-range and each further level halves the window.
// Every level is estimated from repeated cos/sin quadrature measurements.

#include <chrono>
#include <cstddef>

#include "qlab/rng.hpp"

namespace qlab::clocksync {

using Nanos = std::chrono::duration<double, std::nano>;

inline constexpr std::size_t kDefaultShotsPerBit = 100;

/// An ideal clock: same rate as global time, constant offset.
struct Clock {
    Nanos offset{0.0};

    Nanos local(Nanos global) const noexcept { return global + offset; }
    Nanos global(Nanos local) const noexcept { return local - offset; }
};

struct TickingQubit {
    double frequency{0.0};  // radians per nanosecond
    Nanos emission_time{0.0};
};

struct SyncResult {
    Nanos delta_estimate{0.0};
    std::size_t bits_resolved{0};
    std::size_t qubits_used{0};
    std::size_t shots_per_bit{0};
};

/// frequency * (local_time - emission_time), reduced to [0, 2*pi).
double phase_at(const TickingQubit& q, Nanos local_time);

/// Offset resolution after n_bits levels: t_max / 2^n_bits.
Nanos resolution(Nanos t_max, std::size_t n_bits);

/// Estimates true_delta = t_b - t_a. Requires |true_delta| < t_max/2,
/// n_bits >= 1 and shots_per_bit >= 2.
SyncResult tqh_sync(Nanos true_delta, std::size_t n_bits, Nanos t_max,
                    std::size_t shots_per_bit, Rng& rng);

}  // namespace qlab::clocksync
