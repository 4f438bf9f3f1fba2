#include "cliq/verifier.hpp"

#include "cliq/pipeline.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace cliq;
using cliq::test::make_source;

namespace {

Verdict check(const std::string& source, bool optimize,
              const MappingRuleSet* rules = nullptr) {
    auto src = make_source(source);
    Diagnostics diags;
    return differential_check(src, optimize, rules ? *rules : default_mapping(), diags);
}

const std::string kSearchProgram =
    "a = [3, 1, 2, 0]\n"
    "found = -1\n"
    "for i in range(0, 4):\n"
    "    if a[i] == 2:\n"
    "        found = i\n"
    "        break\n"
    "print(found)\n";

} // namespace

TEST(Differential, ClassicalArithmeticPasses) {
    Verdict v = check(
        "x = 6\n"
        "y = x * 7 - 2\n"
        "print(y)\n"
        "print(y / 4)\n",
        false);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_EQ(as_int(v.reference_outputs[0]), 40);
}

TEST(Differential, ClassicalControlFlowPasses) {
    Verdict v = check(
        "s = 0\n"
        "for i in range(1, 11):\n"
        "    if i % 2 == 0:\n"
        "        continue\n"
        "    s = s + i\n"
        "print(s)\n",
        false);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_EQ(as_int(v.reference_outputs[0]), 25);
}

TEST(Differential, OptimizedSearchPassesWithCertainty) {
    Verdict v = check(kSearchProgram, true);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_EQ(v.site_count, 1u);
    EXPECT_NEAR(v.success_probability, 1.0, 1e-9);
    EXPECT_NEAR(v.model_probability, 1.0, 1e-9);
}

TEST(Differential, OptimizeFlagWithoutSitesBehavesClassically) {
    Verdict v = check("x = 2\nprint(x + 2)\n", true);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_EQ(v.site_count, 0u);
}

TEST(Differential, CorruptedMappingRuleFails) {
    // Swap the int,int addition template for subtraction: the harness must
    // catch the first diverging output.
    std::string corrupted = default_mapping_text();
    size_t pos = corrupted.find("binop.add | int,int -> int | ({0} + {1})");
    ASSERT_NE(pos, std::string::npos);
    corrupted.replace(pos, std::string("binop.add | int,int -> int | ({0} + {1})").size(),
                      "binop.add | int,int -> int | ({0} - {1})");
    Diagnostics diags;
    auto rules = load_mapping(corrupted, diags);
    ASSERT_TRUE(rules) << diags.first_error();

    Verdict v = check("x = 5\ny = x + 3\nprint(y)\n", false, &*rules);
    EXPECT_FALSE(v.pass);
    ASSERT_TRUE(v.first_divergence.has_value());
    EXPECT_EQ(*v.first_divergence, 0u);
    EXPECT_NE(v.detail.find("output 0"), std::string::npos);
}

TEST(Differential, SharedRuntimeErrorsPass) {
    Verdict v = check("x = 0\ny = 10 // x\nprint(y)\n", false);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_NE(v.detail.find("E060"), std::string::npos);
}

TEST(Differential, FrontendErrorsFailWithDetail) {
    Verdict v = check("x = undefined_name\n", false);
    EXPECT_FALSE(v.pass);
    EXPECT_NE(v.detail.find("E011"), std::string::npos);
}

TEST(Differential, FloatOutputsComparedWithRelativeTolerance) {
    Verdict v = check(
        "x = 0.1\n"
        "y = 0.2\n"
        "print(x + y)\n"
        "print(x * y / 3.0)\n",
        false);
    EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Differential, MultiTargetSearchPassesUnderRelaxedCriterion) {
    // Three marked entries: the quantum result may be any of them while
    // the classical search returns the smallest; the relaxed replay
    // accepts each verified branch.
    Verdict v = check(
        "a = [7, 2, 7, 7]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 7:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n"
        "print(a[0])\n",
        true);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_EQ(v.site_count, 1u);
    EXPECT_GT(v.branch_count, 1u);
}

TEST(Differential, TwoSitesVerifyIndependently) {
    Verdict v = check(
        "a = [3, 1, 2, 0]\n"
        "b = [5, 5, 6, 5]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 2:\n"
        "        found = i\n"
        "        break\n"
        "other = -1\n"
        "for j in range(0, 4):\n"
        "    if b[j] == 6:\n"
        "        other = j\n"
        "        break\n"
        "print(found + 10 * other)\n",
        true);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_EQ(v.site_count, 2u);
}

TEST(Differential, ProbabilityHalfSearchStillPasses) {
    // N=2: the model gives 0.5 for every iteration count; both branches
    // must replay correctly (hit -> index, miss -> verified -1).
    Verdict v = check(
        "a = [4, 9]\n"
        "found = -1\n"
        "for i in range(0, 2):\n"
        "    if a[i] == 9:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n",
        true);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_NEAR(v.success_probability, 0.5, 1e-9);
    EXPECT_EQ(v.branch_count, 2u);
}

TEST(Differential, VerdictJsonIsDeterministic) {
    Verdict v = check(kSearchProgram, true);
    EXPECT_EQ(v.to_json(), v.to_json());
    EXPECT_NE(v.to_json().find("\"verdict\": \"PASS\""), std::string::npos);
}

TEST(OutputsMatch, IntAndBoolAreBitExact) {
    EXPECT_TRUE(outputs_match(Value{int32_t{5}}, Value{int32_t{5}}));
    EXPECT_FALSE(outputs_match(Value{int32_t{5}}, Value{int32_t{6}}));
    EXPECT_FALSE(outputs_match(Value{int32_t{1}}, Value{true}));
}

TEST(OutputsMatch, FloatToleranceIsRelative) {
    EXPECT_TRUE(outputs_match(Value{1.0}, Value{1.0 + 1e-12}));
    EXPECT_FALSE(outputs_match(Value{1.0}, Value{1.0 + 1e-6}));
    EXPECT_TRUE(outputs_match(Value{1e12}, Value{1e12 + 1.0})); // 1e-12 relative
    EXPECT_TRUE(outputs_match(Value{0.0}, Value{0.0}));
}
