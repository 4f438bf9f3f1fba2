#include "cliq/statevector.hpp"

#include "cliq/execution.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using namespace cliq;

namespace {

constexpr double kTol = 1e-10;

double state_distance(const StateVector& a, const std::vector<std::complex<double>>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
        worst = std::max(worst, std::abs(a.amps()[i] - b[i]));
    }
    return worst;
}

// Seeded random circuit over h/x/z/cx with up to `gates` operations.
void apply_random_circuit(StateVector& sv, uint64_t seed, int gates) {
    Xorshift64Star rng(seed);
    int n = sv.qubit_count();
    for (int g = 0; g < gates; ++g) {
        int kind = static_cast<int>(rng.next() % 4);
        int target = static_cast<int>(rng.next() % static_cast<uint64_t>(n));
        switch (kind) {
        case 0: sv.apply_h(target); break;
        case 1: sv.apply_x(target); break;
        case 2: sv.apply_z(target); break;
        default: {
            if (n < 2) {
                sv.apply_h(target);
                break;
            }
            int control = static_cast<int>(rng.next() % static_cast<uint64_t>(n));
            if (control == target) control = (control + 1) % n;
            sv.apply_gate("cx", 0, {control, target});
            break;
        }
        }
    }
}

} // namespace

TEST(StateVector, InitialStateIsBasisZero) {
    StateVector sv(3);
    EXPECT_EQ(sv.dimension(), 8u);
    EXPECT_NEAR(std::abs(sv.amps()[0] - std::complex<double>{1.0, 0.0}), 0.0, kTol);
    EXPECT_NEAR(sv.norm(), 1.0, kTol);
}

TEST(StateVector, HadamardCreatesUniformPair) {
    StateVector sv(1);
    sv.apply_h(0);
    auto probs = sv.probabilities();
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    EXPECT_NEAR(probs[1], 0.5, 1e-12);
}

TEST(StateVector, GateInvolutions) {
    for (const char gate : {'h', 'x', 'z'}) {
        StateVector sv(3);
        apply_random_circuit(sv, 17, 25);
        std::vector<std::complex<double>> before = sv.amps();
        for (int q = 0; q < 3; ++q) {
            switch (gate) {
            case 'h': sv.apply_h(q); sv.apply_h(q); break;
            case 'x': sv.apply_x(q); sv.apply_x(q); break;
            case 'z': sv.apply_z(q); sv.apply_z(q); break;
            }
        }
        EXPECT_LT(state_distance(sv, before), kTol) << "gate " << gate;
    }
}

TEST(StateVector, NormConservedByRandomCircuits) {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        StateVector sv(4);
        apply_random_circuit(sv, seed, 60);
        EXPECT_NEAR(sv.norm(), 1.0, kTol) << "seed " << seed;
    }
}

TEST(StateVector, NormConservedGateByGateOnRandomStates) {
    // Every individual gate preserves <psi|psi> within 1e-10.
    for (uint64_t seed = 100; seed < 110; ++seed) {
        StateVector sv(3);
        apply_random_circuit(sv, seed, 40); // pseudo-random state
        for (int q = 0; q < 3; ++q) {
            sv.apply_h(q);
            EXPECT_NEAR(sv.norm(), 1.0, kTol);
            sv.apply_x(q);
            EXPECT_NEAR(sv.norm(), 1.0, kTol);
            sv.apply_z(q);
            EXPECT_NEAR(sv.norm(), 1.0, kTol);
        }
        sv.apply_gate("cx", 0, {0, 2});
        EXPECT_NEAR(sv.norm(), 1.0, kTol);
        sv.apply_gate("z", 2, {0, 1, 2});
        EXPECT_NEAR(sv.norm(), 1.0, kTol);
    }
}

TEST(StateVector, ControlledXActsOnlyWhenControlsSet) {
    StateVector sv(2);
    sv.apply_gate("cx", 0, {0, 1}); // control 0 is |0>, no effect
    EXPECT_NEAR(std::abs(sv.amps()[0] - std::complex<double>{1.0, 0.0}), 0.0, kTol);
    sv.apply_x(0);
    sv.apply_gate("cx", 0, {0, 1}); // now flips qubit 1
    EXPECT_NEAR(std::abs(sv.amps()[3] - std::complex<double>{1.0, 0.0}), 0.0, kTol);
}

TEST(StateVector, MultiControlledZFlipsOnlyAllOnes) {
    StateVector sv(3);
    for (int q = 0; q < 3; ++q) sv.apply_h(q);
    std::vector<std::complex<double>> before = sv.amps();
    sv.apply_gate("z", 2, {0, 1, 2});
    for (size_t i = 0; i < sv.dimension(); ++i) {
        std::complex<double> expected = i == 7 ? -before[i] : before[i];
        EXPECT_LT(std::abs(sv.amps()[i] - expected), kTol) << "index " << i;
    }
}

TEST(StateVector, CollapseRenormalizes) {
    StateVector sv(2);
    sv.apply_h(0);
    sv.apply_h(1);
    sv.collapse_to(2);
    auto probs = sv.probabilities();
    EXPECT_NEAR(probs[2], 1.0, kTol);
    EXPECT_NEAR(sv.norm(), 1.0, kTol);
}

TEST(StateVector, CollapseToZeroProbabilityOutcomeForcesBasisState) {
    StateVector sv(1); // |0>
    sv.collapse_to(1); // forced zero-probability branch
    EXPECT_NEAR(std::abs(sv.amps()[1] - std::complex<double>{1.0, 0.0}), 0.0, kTol);
}

TEST(StateVector, ResetRestoresBasisZero) {
    StateVector sv(2);
    apply_random_circuit(sv, 5, 20);
    sv.reset();
    EXPECT_NEAR(std::abs(sv.amps()[0] - std::complex<double>{1.0, 0.0}), 0.0, kTol);
}

TEST(StateVector, RejectsOutOfRangeQubitCounts) {
    EXPECT_THROW(StateVector(0), std::invalid_argument);
    EXPECT_THROW(StateVector(17), std::invalid_argument);
}
