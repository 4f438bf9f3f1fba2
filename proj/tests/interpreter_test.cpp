#include "cliq/interpreter.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace cliq;
using cliq::test::typecheck;

namespace {

std::vector<Value> eval_outputs(const std::string& source) {
    auto tp = typecheck(source);
    Diagnostics diags;
    auto result = reference_eval(tp, diags);
    EXPECT_TRUE(result) << diags.first_error();
    if (!result) return {};
    return result->outputs();
}

std::string eval_error(const std::string& source) {
    auto tp = typecheck(source);
    Diagnostics diags;
    auto result = reference_eval(tp, diags);
    EXPECT_FALSE(result) << "expected a runtime error";
    return diags.first_code();
}

} // namespace

TEST(ReferenceEval, SumOfFirstTen) {
    auto out = eval_outputs(
        "s = 0\n"
        "i = 1\n"
        "while i <= 10:\n"
        "    s = s + i\n"
        "    i = i + 1\n"
        "print(s)\n");
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(as_int(out[0]), 55);
}

TEST(ReferenceEval, FloorDivision) {
    auto out = eval_outputs("x = 5 // 2; print(x)\n");
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(as_int(out[0]), 2);
}

TEST(ReferenceEval, LinearSearchFindsIndex) {
    auto out = eval_outputs(
        "a = [3, 1, 2, 0]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 2:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n");
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(as_int(out[0]), 2);
}

TEST(ReferenceEval, PythonFloorSemanticsOnNegatives) {
    auto out = eval_outputs(
        "print(-7 // 2)\n"
        "print(7 // -2)\n"
        "print(-7 % 2)\n"
        "print(7 % -2)\n");
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(as_int(out[0]), -4);
    EXPECT_EQ(as_int(out[1]), -4);
    EXPECT_EQ(as_int(out[2]), 1);
    EXPECT_EQ(as_int(out[3]), -1);
}

TEST(ReferenceEval, IntOverflowWraps) {
    auto out = eval_outputs(
        "x = 2147483647\n"
        "print(x + 1)\n"
        "print(x * 2)\n"
        "print(-2147483648 - 1)\n");
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(as_int(out[0]), INT32_MIN);
    EXPECT_EQ(as_int(out[1]), -2);
    EXPECT_EQ(as_int(out[2]), INT32_MAX);
}

TEST(ReferenceEval, AbsOfIntMinWraps) {
    auto out = eval_outputs("print(abs(-2147483648))\n");
    EXPECT_EQ(as_int(out[0]), INT32_MIN);
}

TEST(ReferenceEval, ShortCircuitGuardsDivision) {
    auto out = eval_outputs(
        "d = 0\n"
        "ok = d != 0 and 10 // d > 1\n"
        "print(ok)\n"
        "also = d == 0 or 10 // d > 1\n"
        "print(also)\n");
    ASSERT_EQ(out.size(), 2u);
    EXPECT_FALSE(as_bool(out[0]));
    EXPECT_TRUE(as_bool(out[1]));
}

TEST(ReferenceEval, PowSemantics) {
    auto out = eval_outputs(
        "print(2 ** 8)\n"
        "print(3 ** 0)\n"
        "print(2.0 ** -1)\n"
        "print(10 ** 10)\n"); // wraps mod 2^32
    EXPECT_EQ(as_int(out[0]), 256);
    EXPECT_EQ(as_int(out[1]), 1);
    EXPECT_DOUBLE_EQ(as_float(out[2]), 0.5);
    EXPECT_EQ(as_int(out[3]), num::pow_wrap(10, 10));
}

TEST(ReferenceEval, DivisionByZeroIsE060) {
    EXPECT_EQ(eval_error("x = 1\ny = x // 0\n"), "E060");
    EXPECT_EQ(eval_error("x = 1\ny = x % 0\n"), "E060");
    EXPECT_EQ(eval_error("x = 1.0\ny = x / 0.0\n"), "E060");
}

TEST(ReferenceEval, IndexOutOfBoundsIsE060) {
    EXPECT_EQ(eval_error("a = [1, 2]\nx = a[2]\n"), "E060");
    EXPECT_EQ(eval_error("a = [1, 2]\ni = 1\nx = a[i - 2]\n"), "E060"); // negative index
}

TEST(ReferenceEval, NegativeIntExponentIsE060) {
    EXPECT_EQ(eval_error("x = 2\ny = x ** -1\n"), "E060");
}

TEST(ReferenceEval, StepLimitIsE060) {
    EXPECT_EQ(eval_error("x = 1\nwhile True:\n    x = x + 1\n"), "E060");
}

TEST(ReferenceEval, FunctionCalls) {
    auto out = eval_outputs(
        "def square(v: int) -> int:\n"
        "    return v * v\n"
        "def hyp2(x: int, y: int) -> int:\n"
        "    return square(x) + square(y)\n"
        "print(hyp2(3, 4))\n");
    EXPECT_EQ(as_int(out[0]), 25);
}

TEST(ReferenceEval, FunctionParamsAreLocal) {
    auto out = eval_outputs(
        "def bump(v: int) -> int:\n"
        "    v = v + 1\n"
        "    return v\n"
        "x = 5\n"
        "y = bump(x)\n"
        "print(x)\nprint(y)\n");
    EXPECT_EQ(as_int(out[0]), 5);
    EXPECT_EQ(as_int(out[1]), 6);
}

TEST(ReferenceEval, PrintSitesKeepSourceOrderAndLastValue) {
    auto out = eval_outputs(
        "for i in range(0, 3):\n"
        "    print(i)\n"
        "print(99)\n");
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(as_int(out[0]), 2); // last value printed at the loop site
    EXPECT_EQ(as_int(out[1]), 99);
}

TEST(ReferenceEval, UnexecutedPrintSiteIsTypedZero) {
    auto out = eval_outputs(
        "x = 1.5\n"
        "if x < 0.0:\n"
        "    print(x)\n"
        "print(2)\n");
    ASSERT_EQ(out.size(), 2u);
    EXPECT_TRUE(is_float(out[0]));
    EXPECT_DOUBLE_EQ(as_float(out[0]), 0.0);
    EXPECT_EQ(as_int(out[1]), 2);
}

TEST(ReferenceEval, BuiltinsMatchLanguageRules) {
    auto out = eval_outputs(
        "a = [4, -2, 9, 9]\n"
        "print(len(a))\n"
        "print(sum(a))\n"
        "print(min(3, 1.5))\n"
        "print(max(2, 7))\n"
        "print(abs(-3.5))\n");
    EXPECT_EQ(as_int(out[0]), 4);
    EXPECT_EQ(as_int(out[1]), 20);
    EXPECT_DOUBLE_EQ(as_float(out[2]), 1.5);
    EXPECT_EQ(as_int(out[3]), 7);
    EXPECT_DOUBLE_EQ(as_float(out[4]), 3.5);
}

TEST(ReferenceEval, SearchOverrideSkipsBlockAndForcesResult) {
    auto tp = typecheck(
        "a = [3, 1, 2, 0]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 2:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n");
    const AstNode* init = tp.root->children[1].get();
    const AstNode* loop = tp.root->children[2].get();

    SearchOverride ov;
    ov.init_stmt = init;
    ov.loop_stmt = loop;
    ov.found_name = "found";
    ov.values = {3};

    Diagnostics diags;
    auto result = reference_eval(tp, diags, {ov});
    ASSERT_TRUE(result) << diags.first_error();
    EXPECT_EQ(as_int(result->outputs()[0]), 3);
}
