#include "cliq/grover.hpp"

#include "cliq/qasm_interpreter.hpp"
#include "cliq/qasm_parser.hpp"
#include "cliq/qplp.hpp"
#include "cliq/statevector.hpp"

#include "grover_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace cliq;
using cliq::test::BruteForceGrover;

namespace {

// First-peak iteration count: smallest k whose success probability is not
// exceeded by k+1 (ties resolved downward). Matches the closed-form
// floor((pi/4) sqrt(N/M)) in achieved probability.
int first_peak_iterations(const BruteForceGrover& oracle, int limit = 64) {
    double prev = oracle.success_after(0);
    for (int k = 1; k <= limit; ++k) {
        double next = oracle.success_after(k);
        if (next <= prev + 1e-12) return k - 1;
        prev = next;
    }
    return limit;
}

std::vector<int32_t> all_marked(int64_t space) {
    std::vector<int32_t> out(static_cast<size_t>(space));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

// Applies the instantiated circuit's gate sequence directly.
double simulate_marked_mass(const GroverParams& params) {
    StateVector sv(params.qubit_count);
    for (int q = 0; q < params.qubit_count; ++q) sv.apply_h(q);
    auto oracle = grover_oracle_gates(params, "q");
    auto diffusion = grover_diffusion_gates(params.qubit_count, "q");
    for (int it = 0; it < params.iterations; ++it) {
        for (const auto& g : oracle) {
            std::vector<int> operands;
            for (const auto& [reg, idx] : g.operands) operands.push_back(idx);
            sv.apply_gate(g.gate, g.ctrl_count, operands);
        }
        for (const auto& g : diffusion) {
            std::vector<int> operands;
            for (const auto& [reg, idx] : g.operands) operands.push_back(idx);
            sv.apply_gate(g.gate, g.ctrl_count, operands);
        }
    }
    auto probs = sv.probabilities();
    double mass = 0.0;
    for (int32_t m : params.marked) mass += probs[static_cast<size_t>(m)];
    return mass;
}

} // namespace

// Anchor iteration counts, frozen from the brute-force oracle.
TEST(GroverMath, IterationAnchors) {
    EXPECT_EQ(grover_iterations(4, 1), 1);
    EXPECT_EQ(grover_iterations(8, 1), 2);
    EXPECT_EQ(grover_iterations(16, 4), 1);
    EXPECT_EQ(grover_iterations(16, 16), 0);
    EXPECT_EQ(grover_iterations(2, 1), 1);

    EXPECT_EQ(first_peak_iterations(BruteForceGrover{4, {0}}), 1);
    EXPECT_EQ(first_peak_iterations(BruteForceGrover{8, {3}}), 2);
    EXPECT_EQ(first_peak_iterations(BruteForceGrover{16, {1, 5, 9, 13}}), 1);
}

// The closed-form k achieves the oracle's first-peak probability whenever
// amplification helps (M <= N/2). Above that the formula still describes
// the circuit exactly; the translated block relies on the classical
// fallback for the residual mass.
TEST(GroverMath, IterationCountAchievesFirstPeakProbability) {
    for (int64_t space : {2, 4, 8, 16}) {
        for (int64_t m = 1; m <= space / 2; ++m) {
            std::vector<int32_t> marked(static_cast<size_t>(m));
            std::iota(marked.begin(), marked.end(), 0);
            BruteForceGrover oracle{space, marked};
            int k_formula = grover_iterations(space, m);
            int k_peak = first_peak_iterations(oracle);
            EXPECT_NEAR(oracle.success_after(k_formula), oracle.success_after(k_peak), 1e-12)
                << "N=" << space << " M=" << m;
        }
    }
}

TEST(GroverMath, SuccessFormulaMatchesBruteForce) {
    for (int64_t space : {2, 4, 8, 16}) {
        for (int64_t m = 1; m <= space; ++m) {
            // Marked positions are arbitrary for the analytic model; use a
            // spread-out pattern rather than a prefix.
            std::vector<int32_t> marked;
            for (int64_t i = 0; i < space && static_cast<int64_t>(marked.size()) < m; ++i) {
                if ((i * 7 + 3) % space < m) marked.push_back(static_cast<int32_t>(i));
            }
            while (static_cast<int64_t>(marked.size()) < m) {
                marked.push_back(static_cast<int32_t>(marked.size()));
            }
            std::sort(marked.begin(), marked.end());
            marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
            while (static_cast<int64_t>(marked.size()) < m) {
                for (int32_t i = 0; i < space; ++i) {
                    if (std::find(marked.begin(), marked.end(), i) == marked.end()) {
                        marked.push_back(i);
                        break;
                    }
                }
            }
            std::sort(marked.begin(), marked.end());
            BruteForceGrover oracle{space, marked};
            for (int k = 0; k <= 3; ++k) {
                EXPECT_NEAR(grover_success_probability(space, m, k), oracle.success_after(k),
                            1e-12)
                    << "N=" << space << " M=" << m << " k=" << k;
            }
        }
    }
}

// Frozen probability anchors.
TEST(GroverMath, ProbabilityAnchors) {
    EXPECT_NEAR(grover_success_probability(4, 1, 1), 1.0, 1e-12);
    EXPECT_NEAR(grover_success_probability(2, 1, 1), 0.5, 1e-12);
    EXPECT_NEAR(grover_success_probability(8, 1, 2), 0.9453, 1e-3);
    EXPECT_NEAR(grover_success_probability(16, 4, 1), 1.0, 1e-12);

    EXPECT_NEAR((BruteForceGrover{4, {2}}.success_after(1)), 1.0, 1e-12);
    EXPECT_NEAR((BruteForceGrover{2, {1}}.success_after(1)), 0.5, 1e-12);
    EXPECT_NEAR((BruteForceGrover{8, {5}}.success_after(2)), 0.9453, 1e-3);
}

// The instantiated circuit reproduces the analytic model for the whole
// sweep within 1e-9.
TEST(GroverCircuit, SimulatedMassMatchesModelAcrossSweep) {
    for (int n = 1; n <= 4; ++n) {
        int64_t space = int64_t{1} << n;
        for (int64_t m = 1; m <= space; ++m) {
            std::vector<int32_t> marked;
            for (int64_t i = space - m; i < space; ++i) marked.push_back(static_cast<int32_t>(i));
            for (int k = 0; k <= 3; ++k) {
                GroverParams params{n, marked, k};
                double simulated = simulate_marked_mass(params);
                double model = grover_success_probability(space, m, k);
                EXPECT_NEAR(simulated, model, 1e-9)
                    << "n=" << n << " M=" << m << " k=" << k;
            }
        }
    }
}

TEST(GroverCircuit, OracleFlipsOnlyMarkedBasisState) {
    GroverParams params{2, {2}, 1};
    StateVector sv(2);
    sv.apply_h(0);
    sv.apply_h(1);
    std::vector<std::complex<double>> before = sv.amps();
    for (const auto& g : grover_oracle_gates(params, "q")) {
        std::vector<int> operands;
        for (const auto& [reg, idx] : g.operands) operands.push_back(idx);
        sv.apply_gate(g.gate, g.ctrl_count, operands);
    }
    for (size_t i = 0; i < sv.dimension(); ++i) {
        std::complex<double> expected = i == 2 ? -before[i] : before[i];
        EXPECT_LT(std::abs(sv.amps()[i] - expected), 1e-12) << "index " << i;
    }
}

TEST(GroverCircuit, OracleTwiceIsIdentity) {
    for (int n : {1, 2, 3, 4}) {
        GroverParams params{n, {}, 1};
        int64_t space = int64_t{1} << n;
        for (int64_t i = 0; i < space; i += 3) params.marked.push_back(static_cast<int32_t>(i));
        if (params.marked.empty()) params.marked.push_back(0);

        StateVector sv(n);
        for (int q = 0; q < n; ++q) sv.apply_h(q);
        if (n > 1) sv.apply_gate("cx", 0, {0, n - 1});
        std::vector<std::complex<double>> before = sv.amps();

        for (int rep = 0; rep < 2; ++rep) {
            for (const auto& g : grover_oracle_gates(params, "q")) {
                std::vector<int> operands;
                for (const auto& [reg, idx] : g.operands) operands.push_back(idx);
                sv.apply_gate(g.gate, g.ctrl_count, operands);
            }
        }
        double worst = 0.0;
        for (size_t i = 0; i < before.size(); ++i) {
            worst = std::max(worst, std::abs(sv.amps()[i] - before[i]));
        }
        EXPECT_LT(worst, 1e-10) << "n=" << n;
    }
}

TEST(GroverCircuit, ArgmaxIsTheMarkedIndexForUniqueTargets) {
    for (int n : {2, 4}) {
        int64_t space = int64_t{1} << n;
        int32_t marked = static_cast<int32_t>(space / 2 + 1);
        GroverParams params{n, {marked}, grover_iterations(space, 1)};
        StateVector sv(n);
        for (int q = 0; q < n; ++q) sv.apply_h(q);
        auto oracle = grover_oracle_gates(params, "q");
        auto diffusion = grover_diffusion_gates(n, "q");
        for (int it = 0; it < params.iterations; ++it) {
            for (const auto& g : oracle) {
                std::vector<int> operands;
                for (const auto& [reg, idx] : g.operands) operands.push_back(idx);
                sv.apply_gate(g.gate, g.ctrl_count, operands);
            }
            for (const auto& g : diffusion) {
                std::vector<int> operands;
                for (const auto& [reg, idx] : g.operands) operands.push_back(idx);
                sv.apply_gate(g.gate, g.ctrl_count, operands);
            }
        }
        auto probs = sv.probabilities();
        size_t argmax = 0;
        for (size_t i = 1; i < probs.size(); ++i) {
            if (probs[i] > probs[argmax]) argmax = i;
        }
        EXPECT_EQ(static_cast<int32_t>(argmax), marked) << "n=" << n;
    }
}

// Full fragment: reset + H layer + iterations + measurement + fallback.
TEST(GroverInstantiate, FragmentExecutesWithCertainOutcome) {
    QuantumBlockInfo info;
    info.params = {2, {2}, 1};
    info.array_name = "a";
    info.found_name = "found";
    info.array_values = {9, 9, 7, 9};
    info.target_value = 7;

    Diagnostics diags;
    auto fragment = instantiate_grover(info, 0, diags);
    ASSERT_TRUE(fragment) << diags.first_error();

    std::string text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
    text += "array[int[32], 4] a = {9, 9, 7, 9};\nint[32] found;\n";
    for (const auto& line : fragment->decl_lines) text += line + "\n";
    for (const auto& line : fragment->stmt_lines) text += line + "\n";

    auto program = parse_qasm(text, diags);
    ASSERT_TRUE(program) << diags.first_error() << "\n" << text;

    QasmExecutionOptions options;
    auto result = interpret_qasm(*program, options, diags);
    ASSERT_TRUE(result) << diags.first_error();
    ASSERT_EQ(result->trace.size(), 1u);
    ASSERT_EQ(result->trace[0].distribution.size(), 4u);
    EXPECT_NEAR(result->trace[0].distribution[2], 1.0, 1e-9);
    ASSERT_EQ(result->branches.size(), 1u);
    EXPECT_EQ(as_int(result->branches[0].final_scalars.at("found")), 2);
}

TEST(GroverInstantiate, AllMarkedMeansZeroIterationsUniform) {
    QuantumBlockInfo info;
    info.params = {2, {0, 1, 2, 3}, grover_iterations(4, 4)};
    EXPECT_EQ(info.params.iterations, 0);
    info.array_name = "a";
    info.found_name = "found";
    info.array_values = {5, 5, 5, 5};
    info.target_value = 5;

    Diagnostics diags;
    auto fragment = instantiate_grover(info, 0, diags);
    ASSERT_TRUE(fragment);

    std::string text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
    text += "array[int[32], 4] a = {5, 5, 5, 5};\nint[32] found;\n";
    for (const auto& line : fragment->decl_lines) text += line + "\n";
    for (const auto& line : fragment->stmt_lines) text += line + "\n";

    auto program = parse_qasm(text, diags);
    ASSERT_TRUE(program) << diags.first_error();
    QasmExecutionOptions options;
    auto result = interpret_qasm(*program, options, diags);
    ASSERT_TRUE(result) << diags.first_error();
    ASSERT_EQ(result->trace.size(), 1u);
    for (double p : result->trace[0].distribution) EXPECT_NEAR(p, 0.25, 1e-12);
    EXPECT_EQ(result->branches.size(), 4u);
}

TEST(GroverInstantiate, QubitLimitIsE041) {
    QuantumBlockInfo info;
    info.params = {17, {0}, 1};
    info.array_name = "a";
    info.found_name = "found";
    Diagnostics diags;
    EXPECT_FALSE(instantiate_grover(info, 0, diags));
    EXPECT_EQ(diags.first_code(), "E041");
}
