#include "qlab/clocksync.hpp"

#include <cmath>
#include <numbers>

#include "qlab/errors.hpp"
#include "qlab/qstate.hpp"

namespace qlab::clocksync {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_signed(double x) {
    x = std::remainder(x, kTwoPi);  // (-pi, pi]
    return x;
}

// One projective shot on a qubit carrying relative phase `phi`. With
// `sin_basis` the readout basis is rotated by -pi/2, so P(0) = (1 + sin phi)/2
// instead of (1 + cos phi)/2.
int measure_quadrature(double phi, bool sin_basis, Rng& rng) {
    using qstate::Gate;
    auto q = qstate::StateVector::basis(1, 0);
    q.apply(Gate::h(0));
    q.apply(Gate::phase(0, phi));
    if (sin_basis) q.apply(Gate::phase(0, -std::numbers::pi / 2.0));
    q.apply(Gate::h(0));
    return qstate::measure_qubit(std::move(q), 0, rng).record.outcome;
}

double estimate_phase(double phi, std::size_t shots, Rng& rng) {
    const std::size_t cos_shots = (shots + 1) / 2;
    const std::size_t sin_shots = shots / 2;
    std::size_t cos_zero = 0;
    std::size_t sin_zero = 0;
    for (std::size_t i = 0; i < cos_shots; ++i) cos_zero += measure_quadrature(phi, false, rng) == 0;
    for (std::size_t i = 0; i < sin_shots; ++i) sin_zero += measure_quadrature(phi, true, rng) == 0;
    const double c = 2.0 * static_cast<double>(cos_zero) / static_cast<double>(cos_shots) - 1.0;
    const double s = 2.0 * static_cast<double>(sin_zero) / static_cast<double>(sin_shots) - 1.0;
    return std::atan2(s, c);
}

}  // namespace

double phase_at(const TickingQubit& q, Nanos local_time) {
    const double elapsed = (local_time - q.emission_time).count();
    if (elapsed < 0.0) throw DomainError("ticking qubit read before its emission");
    if (!(q.frequency > 0.0)) throw DomainError("ticking qubit frequency must be positive");
    double phase = std::fmod(q.frequency * elapsed, kTwoPi);
    if (phase < 0.0) phase += kTwoPi;
    return phase;
}

Nanos resolution(Nanos t_max, std::size_t n_bits) {
    return Nanos{std::ldexp(t_max.count(), -static_cast<int>(n_bits))};
}

SyncResult tqh_sync(Nanos true_delta, std::size_t n_bits, Nanos t_max,
                    std::size_t shots_per_bit, Rng& rng) {
    if (!(t_max.count() > 0.0)) throw DomainError("t_max must be positive");
    if (!(std::abs(true_delta.count()) < t_max.count() / 2.0)) {
        throw DomainError("clock offset outside (-t_max/2, t_max/2)");
    }
    if (n_bits == 0 || n_bits > 52) throw DomainError("n_bits must be in [1, 52]");
    if (shots_per_bit < 2) throw DomainError("need at least two shots per bit");

    // Receiver reads every qubit when its own clock shows t_max; the
    // sender's clock then shows t_max - delta, which stays non-negative.
    const Nanos read_local = t_max;
    const Nanos sender_reading = read_local - true_delta;

    double estimate = 0.0;
    for (std::size_t k = 0; k < n_bits; ++k) {
        const double omega = kTwoPi * std::ldexp(1.0, static_cast<int>(k)) / t_max.count();
        const TickingQubit q{omega, Nanos{0.0}};
        const double phi = phase_at(q, sender_reading);
        const double measured = estimate_phase(phi, shots_per_bit, rng);
        // omega * delta == omega * read_local - phi (mod 2pi); correct the
        // running estimate by the wrapped residual at this level.
        const double residual =
            wrap_signed(omega * read_local.count() - measured - omega * estimate);
        estimate += residual / omega;
    }
    return {Nanos{estimate}, n_bits, n_bits * shots_per_bit, shots_per_bit};
}

}  // namespace qlab::clocksync
