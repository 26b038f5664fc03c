#include "qlab/qstate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qlab/errors.hpp"

namespace qlab::qstate {
namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

Gate random_gate(std::size_t n, Rng& rng) {
    const auto q = static_cast<std::size_t>(rng.below(n));
    switch (rng.below(n > 1 ? 5 : 4)) {
        case 0: return Gate::h(q);
        case 1: return Gate::x(q);
        case 2: return Gate::z(q);
        case 3: return Gate::phase(q, rng.uniform01() * 2.0 * std::numbers::pi);
        default: {
            auto t = static_cast<std::size_t>(rng.below(n - 1));
            if (t >= q) ++t;
            return Gate::cnot(q, t);
        }
    }
}

StateVector random_state(std::size_t n, Rng& rng) {
    auto s = StateVector::basis(n, rng.below(std::uint64_t{1} << n));
    for (int i = 0; i < 40; ++i) s.apply(random_gate(n, rng));
    return s;
}

TEST(BasisState, Definitions) {
    auto s = new_basis_state(1, 0);
    EXPECT_EQ(s.dimension(), 2u);
    EXPECT_EQ(s[0], Amplitude(1.0));
    EXPECT_EQ(s[1], Amplitude(0.0));

    auto t = new_basis_state(2, 3);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t[i], Amplitude(0.0));
    EXPECT_EQ(t[3], Amplitude(1.0));
}

TEST(BasisState, Errors) {
    EXPECT_THROW(new_basis_state(3, 8), DomainError);
    EXPECT_THROW(new_basis_state(25, 0), ResourceError);
    EXPECT_NO_THROW(new_basis_state(4, 0, 4));
    EXPECT_THROW(new_basis_state(5, 0, 4), ResourceError);
}

TEST(ApplyGate, HadamardOnZero) {
    auto s = apply_gate(new_basis_state(1, 0), Gate::h(0));
    EXPECT_NEAR(s[0].real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(s[1].real(), kInvSqrt2, 1e-15);
}

TEST(ApplyGate, CnotFlipsTargetWhenControlSet) {
    // Kets here are written |q0 q1>, so |10> is basis index 0b01.
    auto s = apply_gate(new_basis_state(2, 0b01), Gate::cnot(0, 1));
    EXPECT_EQ(s[0b11], Amplitude(1.0));
    auto u = apply_gate(new_basis_state(2, 0b10), Gate::cnot(0, 1));
    EXPECT_EQ(u[0b10], Amplitude(1.0));
}

TEST(ApplyGate, XIsInvolution) {
    Rng rng(7);
    auto s = random_state(3, rng);
    auto twice = apply_gate(apply_gate(s, Gate::x(1)), Gate::x(1));
    for (std::size_t i = 0; i < s.dimension(); ++i) EXPECT_LT(std::abs(s[i] - twice[i]), 1e-12);
}

TEST(ApplyGate, InvalidTargets) {
    auto s = new_basis_state(2, 0);
    EXPECT_THROW(apply_gate(s, Gate::h(2)), DomainError);
    EXPECT_THROW(apply_gate(s, Gate::cnot(1, 1)), DomainError);
    EXPECT_THROW(apply_gate(s, Gate::cnot(3, 0)), DomainError);
    EXPECT_THROW(apply_gate(s, Gate::phase(0, std::nan(""))), DomainError);
}

TEST(Properties, NormPreservedOverRandomCircuits) {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(10);
        auto s = StateVector::basis(n, 0);
        const auto len = rng.below(101);
        for (std::uint64_t i = 0; i < len; ++i) {
            s.apply(random_gate(n, rng));
            ASSERT_NEAR(s.norm_squared(), 1.0, 1e-9);
        }
    }
}

TEST(Properties, GateThenInverseIsIdentity) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        auto s = random_state(n, rng);
        const auto g = random_gate(n, rng);
        auto back = apply_gate(apply_gate(s, g), inverse(g));
        for (std::size_t i = 0; i < s.dimension(); ++i) ASSERT_LT(std::abs(s[i] - back[i]), 1e-12);
    }
}

TEST(Measure, BasisStateIsCertain) {
    Rng rng(1);
    auto m = measure_qubit(new_basis_state(1, 1), 0, rng);
    EXPECT_EQ(m.record.outcome, 1);
    EXPECT_DOUBLE_EQ(m.record.probability, 1.0);
}

TEST(Measure, PlusStateFrequency) {
    Rng rng(5);
    const auto plus = apply_gate(new_basis_state(1, 0), Gate::h(0));
    int zeros = 0;
    for (int i = 0; i < 10000; ++i) zeros += measure_qubit(plus, 0, rng).record.outcome == 0;
    EXPECT_NEAR(zeros / 10000.0, 0.5, 0.02);
}

TEST(Measure, BellPairOutcomesAgree) {
    auto bell = apply_gate(apply_gate(new_basis_state(2, 0), Gate::h(0)), Gate::cnot(0, 1));
    // Exhaustive branch enumeration over the 4-dim state.
    for (int first = 0; first < 2; ++first) {
        auto branch = bell;
        const double p_first = branch.collapse(0, first);
        EXPECT_NEAR(p_first, 0.5, 1e-12);
        EXPECT_NEAR(branch.probability_one(1), first, 1e-12);
    }
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        auto a = measure_qubit(bell, 0, rng);
        auto b = measure_qubit(std::move(a.state), 1, rng);
        ASSERT_EQ(a.record.outcome, b.record.outcome);
        ASSERT_NEAR(b.record.probability, 1.0, 1e-12);
    }
}

TEST(Measure, RecordedProbabilityMatchesBornRule) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = random_state(4, rng);
        const auto q = static_cast<std::size_t>(rng.below(4));
        const double p1 = s.probability_one(q);
        auto m = measure_qubit(s, q, rng);
        const double expected = m.record.outcome ? p1 : 1.0 - p1;
        ASSERT_NEAR(m.record.probability, expected, 1e-9);
        ASSERT_NEAR(m.state.norm_squared(), 1.0, 1e-9);
    }
}

TEST(Measure, BornConsistencyWithinThreeStandardErrors) {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = random_state(3, rng);
        const double p1 = s.probability_one(2);
        const int shots = 10000;
        int ones = 0;
        for (int i = 0; i < shots; ++i) ones += measure_qubit(s, 2, rng).record.outcome;
        const double se = std::sqrt(p1 * (1.0 - p1) / shots);
        EXPECT_LE(std::abs(ones / double(shots) - p1), 3.0 * se + 1e-12);
    }
}

TEST(Measure, BadQubit) {
    Rng rng(1);
    EXPECT_THROW(measure_qubit(new_basis_state(2, 0), 2, rng), DomainError);
}

TEST(Fidelity, Examples) {
    const auto zero = new_basis_state(1, 0);
    const auto one = new_basis_state(1, 1);
    const auto plus = apply_gate(zero, Gate::h(0));
    EXPECT_DOUBLE_EQ(fidelity(zero, zero), 1.0);
    EXPECT_DOUBLE_EQ(fidelity(zero, one), 0.0);
    EXPECT_NEAR(fidelity(zero, plus), 0.5, 1e-15);
    EXPECT_THROW(fidelity(zero, new_basis_state(2, 0)), DomainError);
}

TEST(FromAmplitudes, RejectsMalformed) {
    EXPECT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), DomainError);
    EXPECT_THROW(StateVector::from_amplitudes({1.0, 1.0}), DomainError);
    auto s = StateVector::from_amplitudes({0.6, Amplitude(0.0, 0.8)});
    EXPECT_EQ(s.n_qubits(), 1u);
}

}  // namespace
}  // namespace qlab::qstate
