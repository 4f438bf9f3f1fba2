#include "cliq/qasm_interpreter.hpp"

#include "cliq/interpreter.hpp"
#include "cliq/lowering.hpp"
#include "cliq/pipeline.hpp"
#include "cliq/qasm_parser.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cliq;
using cliq::test::typecheck;

namespace {

QasmProgram parse_program(const std::string& text) {
    Diagnostics diags;
    auto program = parse_qasm(text, diags);
    EXPECT_TRUE(program) << diags.first_error();
    if (!program) throw std::runtime_error("parse failed");
    return std::move(*program);
}

ExecutionResult run_exact(const QasmProgram& program) {
    Diagnostics diags;
    QasmExecutionOptions options;
    auto result = interpret_qasm(program, options, diags);
    EXPECT_TRUE(result) << diags.first_error();
    if (!result) throw std::runtime_error("execution failed");
    return std::move(*result);
}

QasmProgram translate(const std::string& source) {
    auto tp = typecheck(source);
    Diagnostics diags;
    auto program = lower_program(tp, default_mapping(), diags);
    EXPECT_TRUE(program) << diags.first_error();
    if (!program) throw std::runtime_error("lowering failed");
    return std::move(*program);
}

} // namespace

TEST(QasmInterpreter, TranslatedSumMatchesReference) {
    const std::string source =
        "s = 0\n"
        "i = 1\n"
        "while i <= 10:\n"
        "    s = s + i\n"
        "    i = i + 1\n"
        "print(s)\n";
    auto tp = typecheck(source);
    Diagnostics diags;
    auto ref = reference_eval(tp, diags);
    ASSERT_TRUE(ref);

    auto program = translate(source);
    auto result = run_exact(program);
    EXPECT_EQ(result.mode, ExecutionResult::Mode::Classical);
    ASSERT_EQ(result.branches.size(), 1u);
    ASSERT_EQ(result.branches[0].outputs.size(), 1u);
    EXPECT_EQ(as_int(result.branches[0].outputs[0]), 55);
    EXPECT_EQ(as_int(ref->outputs()[0]), 55);
    EXPECT_TRUE(result.trace.empty());
}

TEST(QasmInterpreter, HadamardMeasureGivesHalfHalf) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "include \"stdgates.inc\";\n"
        "qubit[1] q;\n"
        "bit[1] c;\n"
        "h q[0];\n"
        "c = measure q;\n");
    auto result = run_exact(program);
    ASSERT_EQ(result.trace.size(), 1u);
    ASSERT_EQ(result.trace[0].distribution.size(), 2u);
    EXPECT_NEAR(result.trace[0].distribution[0], 0.5, 1e-12);
    EXPECT_NEAR(result.trace[0].distribution[1], 0.5, 1e-12);
    EXPECT_EQ(result.branches.size(), 2u);
}

TEST(QasmInterpreter, GroverProgramConcentratesOnMarkedIndex) {
    const std::string source =
        "a = [9, 9, 7, 9]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 7:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n";
    auto src = cliq::test::make_source(source);
    TranslateOptions options;
    options.mode = OptimizeMode::ApplyAll;
    Diagnostics diags;
    auto translation = translate_source(src, options, diags);
    ASSERT_TRUE(translation) << diags.first_error();
    ASSERT_EQ(translation->report.applied_count(), 1u);

    auto result = run_exact(translation->program);
    ASSERT_EQ(result.trace.size(), 1u);
    EXPECT_NEAR(result.trace[0].distribution[2], 1.0, 1e-9);
    // One dominating branch; outcome 2 maps to found == 2.
    ASSERT_GE(result.branches.size(), 1u);
    const Branch* main_branch = nullptr;
    for (const auto& b : result.branches) {
        if (b.probability > 0.5) main_branch = &b;
    }
    ASSERT_NE(main_branch, nullptr);
    EXPECT_EQ(as_int(main_branch->final_scalars.at("found")), 2);
    EXPECT_EQ(as_int(main_branch->outputs.at(0)), 2);
}

TEST(QasmInterpreter, ForcedOutcomesDriveTheFallback) {
    const std::string source =
        "a = [9, 9, 7, 9]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 7:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n";
    auto src = cliq::test::make_source(source);
    TranslateOptions toptions;
    toptions.mode = OptimizeMode::ApplyAll;
    Diagnostics diags;
    auto translation = translate_source(src, toptions, diags);
    ASSERT_TRUE(translation) << diags.first_error();

    // Fallback soundness: every forced outcome yields either the marked
    // index or the verified -1.
    for (int32_t outcome = 0; outcome < 4; ++outcome) {
        QasmExecutionOptions options;
        options.mode = ExecutionResult::Mode::Forced;
        options.forced_outcomes = {outcome};
        Diagnostics ediags;
        auto result = interpret_qasm(translation->program, options, ediags);
        ASSERT_TRUE(result) << ediags.first_error();
        int32_t found = as_int(result->branches[0].final_scalars.at("found"));
        if (outcome == 2) {
            EXPECT_EQ(found, 2);
        } else {
            EXPECT_EQ(found, -1) << "outcome " << outcome;
        }
    }
}

TEST(QasmInterpreter, SampledModeIsSeedDeterministic) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "include \"stdgates.inc\";\n"
        "qubit[2] q;\n"
        "bit[2] c;\n"
        "h q[0];\n"
        "h q[1];\n"
        "c = measure q;\n");
    QasmExecutionOptions options;
    options.mode = ExecutionResult::Mode::Sampled;
    options.shots = 2000;
    options.seed = 42;

    Diagnostics diags;
    auto a = interpret_qasm(program, options, diags);
    auto b = interpret_qasm(program, options, diags);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->sample_counts, b->sample_counts);

    options.seed = 43;
    auto c = interpret_qasm(program, options, diags);
    ASSERT_TRUE(c);
    EXPECT_NE(a->sample_counts, c->sample_counts);

    uint64_t total = 0;
    for (const auto& [outcomes, count] : a->sample_counts) total += count;
    EXPECT_EQ(total, 2000u);
}

TEST(QasmInterpreter, SampledFrequenciesTrackExactProbabilities) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "include \"stdgates.inc\";\n"
        "qubit[1] q;\n"
        "bit[1] c;\n"
        "h q[0];\n"
        "c = measure q;\n");
    QasmExecutionOptions options;
    options.mode = ExecutionResult::Mode::Sampled;
    options.shots = 100000;
    options.seed = 7;
    Diagnostics diags;
    auto result = interpret_qasm(program, options, diags);
    ASSERT_TRUE(result);
    double p_hat =
        static_cast<double>(result->sample_counts[{1}]) / static_cast<double>(options.shots);
    double sigma = std::sqrt(0.5 * 0.5 / static_cast<double>(options.shots));
    EXPECT_NEAR(p_hat, 0.5, 3.0 * sigma);
}

TEST(QasmInterpreter, ResetRestoresGroundState) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "include \"stdgates.inc\";\n"
        "qubit[1] q;\n"
        "bit[1] c;\n"
        "x q[0];\n"
        "reset q;\n"
        "c = measure q;\n");
    auto result = run_exact(program);
    ASSERT_EQ(result.branches.size(), 1u);
    EXPECT_EQ(result.branches[0].outcomes[0], 0);
}

TEST(QasmInterpreter, TwoRegistersBranchIndependently) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "include \"stdgates.inc\";\n"
        "qubit[1] a;\n"
        "qubit[1] b;\n"
        "bit[1] ca;\n"
        "bit[1] cb;\n"
        "h a[0];\n"
        "h b[0];\n"
        "ca = measure a;\n"
        "cb = measure b;\n");
    auto result = run_exact(program);
    EXPECT_EQ(result.branches.size(), 4u);
    double total = 0.0;
    for (const auto& b : result.branches) total += b.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(QasmInterpreter, SubroutineCallsEvaluate) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "def twice(int[32] v) -> int[32] {\n"
        "  return (v * 2);\n"
        "}\n"
        "int[32] x;\n"
        "int[32] __out_0;\n"
        "x = twice(21);\n"
        "__out_0 = x;\n");
    auto result = run_exact(program);
    EXPECT_EQ(as_int(result.branches[0].outputs.at(0)), 42);
}

TEST(QasmInterpreter, IntDivisionIsFloorInTheSubset) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "int[32] x;\n"
        "int[32] __out_0;\n"
        "x = -7;\n"
        "__out_0 = (x / 2);\n");
    auto result = run_exact(program);
    EXPECT_EQ(as_int(result.branches[0].outputs.at(0)), -4);
}

TEST(QasmInterpreter, RuntimeErrorsAreE060) {
    auto program = parse_program(
        "OPENQASM 3.0;\n"
        "int[32] x;\n"
        "int[32] y;\n"
        "x = 0;\n"
        "y = (1 / x);\n");
    Diagnostics diags;
    QasmExecutionOptions options;
    EXPECT_FALSE(interpret_qasm(program, options, diags));
    EXPECT_EQ(diags.first_code(), "E060");
}

TEST(QasmInterpreter, QubitBudgetGuardIsE063) {
    // Hand-built program bypassing parse-time validation.
    QasmProgram program;
    QasmDecl a;
    a.type = {QasmType::Kind::QubitReg, 10};
    a.name = "a";
    QasmDecl b;
    b.type = {QasmType::Kind::QubitReg, 9};
    b.name = "b";
    program.decls.push_back(a);
    program.decls.push_back(b);

    Diagnostics diags;
    QasmExecutionOptions options;
    EXPECT_FALSE(interpret_qasm(program, options, diags));
    EXPECT_EQ(diags.first_code(), "E063");
}
