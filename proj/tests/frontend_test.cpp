#include "cliq/parser.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace cliq;
using cliq::test::frontend;
using cliq::test::make_source;

namespace {

AstPtr parse_ok(const std::string& text) {
    Diagnostics diags;
    auto src = make_source(text);
    auto result = parse_module(src, diags);
    EXPECT_TRUE(result) << diags.first_error();
    if (!result) throw std::runtime_error("parse failed");
    return std::move(result->root);
}

std::string parse_code(const std::string& text) {
    Diagnostics diags;
    auto src = make_source(text);
    auto result = parse_module(src, diags);
    EXPECT_FALSE(result) << "expected a parse failure";
    return diags.first_code();
}

} // namespace

TEST(Parser, SingleAssignment) {
    auto root = parse_ok("x = 1\n");
    EXPECT_EQ(dump_ast(*root), "Module[Assign[Name(x) IntLit(1)]]");
}

TEST(Parser, PrecedenceMulBeforeAdd) {
    auto root = parse_ok("y = 1 + 2 * 3\n");
    EXPECT_EQ(dump_ast(*root),
              "Module[Assign[Name(y) BinOp(+)[IntLit(1) BinOp(*)[IntLit(2) IntLit(3)]]]]");
}

TEST(Parser, PowerIsRightAssociativeAndTighterThanUnaryMinus) {
    auto root = parse_ok("y = -2 ** 2\n");
    EXPECT_EQ(dump_ast(*root),
              "Module[Assign[Name(y) UnaryOp(-)[BinOp(**)[IntLit(2) IntLit(2)]]]]");
    auto root2 = parse_ok("y = 2 ** 3 ** 2\n");
    EXPECT_EQ(dump_ast(*root2),
              "Module[Assign[Name(y) BinOp(**)[IntLit(2) BinOp(**)[IntLit(3) IntLit(2)]]]]");
}

TEST(Parser, BooleanPrecedence) {
    auto root = parse_ok("b = True or False and not True\n");
    EXPECT_EQ(dump_ast(*root),
              "Module[Assign[Name(b) BoolOp(or)[BoolLit(True) "
              "BoolOp(and)[BoolLit(False) UnaryOp(not)[BoolLit(True)]]]]]");
}

TEST(Parser, ClassIsUnsupportedConstruct) {
    EXPECT_EQ(parse_code("class A: pass\n"), "E002");
}

TEST(Parser, LambdaAndImportAreUnsupported) {
    EXPECT_EQ(parse_code("f = lambda: 1\n"), "E002");
    EXPECT_EQ(parse_code("import os\n"), "E002");
}

TEST(Parser, TabIndentationIsRejected) {
    EXPECT_EQ(parse_code("if True:\n\tx = 1\n"), "E003");
}

TEST(Parser, ChainedComparisonRejected) {
    EXPECT_EQ(parse_code("b = 1 < 2 < 3\n"), "E001");
}

TEST(Parser, BreakOutsideLoop) { EXPECT_EQ(parse_code("break\n"), "E001"); }

TEST(Parser, ReturnOutsideFunction) { EXPECT_EQ(parse_code("return 1\n"), "E001"); }

TEST(Parser, ReservedDunderNames) { EXPECT_EQ(parse_code("__x = 1\n"), "E001"); }

TEST(Parser, NonRangeForRejected) { EXPECT_EQ(parse_code("for x in xs: pass\n"), "E002"); }

TEST(Parser, ElifChainsDesugarToNestedIf) {
    auto root = parse_ok(
        "x = 1\n"
        "if x == 1:\n"
        "    y = 1\n"
        "elif x == 2:\n"
        "    y = 2\n"
        "else:\n"
        "    y = 3\n");
    const AstNode& outer_if = root->child(1);
    ASSERT_EQ(outer_if.kind, NodeKind::If);
    ASSERT_EQ(outer_if.then_count(), 1u);
    ASSERT_EQ(outer_if.else_count(), 1u);
    const AstNode& nested = outer_if.child(2);
    EXPECT_EQ(nested.kind, NodeKind::If);
    EXPECT_EQ(nested.else_count(), 1u);
}

TEST(Parser, SemicolonSeparatedSimpleStatements) {
    auto root = parse_ok("x = 5 // 2; print(x)\n");
    ASSERT_EQ(root->children.size(), 2u);
}

TEST(Parser, InlineBlockAfterColon) {
    auto root = parse_ok("i = 0\nwhile i < 10: i = i + 1\n");
    const AstNode& loop = root->child(1);
    ASSERT_EQ(loop.kind, NodeKind::While);
    EXPECT_EQ(loop.children.size(), 2u);
}

TEST(Parser, RangeFormsNormalizeToStartStopStep) {
    auto root = parse_ok("for i in range(4): pass\n");
    const AstNode& loop = root->child(0);
    ASSERT_EQ(loop.kind, NodeKind::ForRange);
    ASSERT_EQ(loop.children.size(), 3u); // start, stop, step; empty body
    EXPECT_TRUE(loop.child(0).synthetic);
    EXPECT_EQ(loop.child(0).int_attr, 0);
    EXPECT_TRUE(loop.child(2).synthetic);
    EXPECT_EQ(loop.child(2).int_attr, 1);
}

TEST(Parser, DeterministicReparse) {
    const std::string program =
        "a = [3, 1, 2, 0]\n"
        "found = -1\n"
        "for i in range(0, 4):\n"
        "    if a[i] == 2:\n"
        "        found = i\n"
        "        break\n"
        "print(found)\n";
    auto first = parse_ok(program);
    auto second = parse_ok(program);
    EXPECT_TRUE(structurally_equal(*first, *second));
}

// Span soundness: the text slice of any expression node re-parses to a
// structurally equal tree.
namespace {

void collect_expressions(const AstNode& node, std::vector<const AstNode*>& out) {
    switch (node.kind) {
    case NodeKind::BinOp:
    case NodeKind::UnaryOp:
    case NodeKind::Compare:
    case NodeKind::BoolOp:
    case NodeKind::Call:
    case NodeKind::Name:
    case NodeKind::IntLit:
    case NodeKind::FloatLit:
    case NodeKind::BoolLit:
    case NodeKind::Index: out.push_back(&node); break;
    default: break;
    }
    for (const auto& c : node.children) collect_expressions(*c, out);
}

} // namespace

TEST(Parser, SpanSoundnessOnExpressions) {
    const std::string program =
        "x = (1 + 2) * abs(-3)\n"
        "b = x > 1 and not (x == 4)\n"
        "a = [5, 6, 7, 8]\n"
        "y = a[x % 4] + max(x, 2)\n";
    Diagnostics diags;
    auto src = make_source(program);
    auto result = parse_module(src, diags);
    ASSERT_TRUE(result);

    std::vector<const AstNode*> exprs;
    collect_expressions(*result->root, exprs);
    ASSERT_FALSE(exprs.empty());
    for (const AstNode* e : exprs) {
        if (e->synthetic) continue;
        std::string text(src.slice(e->span));
        Diagnostics ediags;
        auto reparsed = parse_expression_text(text, ediags);
        ASSERT_TRUE(reparsed) << "slice '" << text << "' failed: " << ediags.first_error();
        EXPECT_TRUE(structurally_equal(*e, *reparsed)) << "slice '" << text << "'";
    }
}

// ---- checker ----

TEST(Checker, IntArithmeticClosure) {
    auto tp = cliq::test::typecheck("x = 1\ny = x + 2\n");
    EXPECT_TRUE(tp.module_symbols.at("x").type.is_int());
    EXPECT_TRUE(tp.module_symbols.at("y").type.is_int());
}

TEST(Checker, DivisionYieldsFloat) {
    auto tp = cliq::test::typecheck("x = 1 / 2\n");
    EXPECT_TRUE(tp.module_symbols.at("x").type.is_float());
}

TEST(Checker, FloorDivisionStaysInt) {
    auto tp = cliq::test::typecheck("x = 5 // 2\n");
    EXPECT_TRUE(tp.module_symbols.at("x").type.is_int());
}

TEST(Checker, NonBoolConditionIsE013) {
    auto f = frontend("if 3: pass\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E013");
}

TEST(Checker, UndefinedNameIsE011) {
    auto f = frontend("x = y + 1\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E011");
}

TEST(Checker, NonConstantArraySizeIsE012) {
    auto f = frontend("n = 5\nif True: n = 6\na = [0] * n\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E012");
}

TEST(Checker, RetypingIsE010) {
    auto f = frontend("x = 1\nx = 1.5\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E010");
}

TEST(Checker, NoImplicitBoolIntCoercion) {
    EXPECT_EQ(frontend("x = True + 1\n").diags.first_code(), "E010");
    EXPECT_EQ(frontend("b = 1 and True\n").diags.first_code(), "E010");
}

TEST(Checker, MixedArithmeticPromotesToFloat) {
    auto tp = cliq::test::typecheck("x = 1 + 2.5\n");
    EXPECT_TRUE(tp.module_symbols.at("x").type.is_float());
}

TEST(Checker, ArrayRepetitionComputesSize) {
    auto tp = cliq::test::typecheck("a = [7] * 6\n");
    EXPECT_EQ(tp.module_symbols.at("a").type.size, 6);
    EXPECT_EQ(tp.module_symbols.at("a").array_init.size(), 6u);
    EXPECT_EQ(tp.module_symbols.at("a").array_init[5], 7);
}

TEST(Checker, ArrayElementsMustBeConstant) {
    auto f = frontend("x = 1\nwhile x < 3: x = x + 1\na = [x, 2]\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E015");
}

TEST(Checker, NestedArrayDeclarationRejected) {
    auto f = frontend("if True:\n    a = [1, 2]\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E015");
}

TEST(Checker, RangeStepMustBeNonZeroConstant) {
    EXPECT_EQ(frontend("for i in range(0, 4, 0): pass\n").diags.first_code(), "E014");
    EXPECT_EQ(frontend("s = 2\nif True: s = 3\nfor i in range(0, 4, s): pass\n")
                  .diags.first_code(),
              "E014");
}

TEST(Checker, LoopVariableScopedToBody) {
    auto f = frontend("for i in range(3): pass\nx = i\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E011");
}

TEST(Checker, LoopVariableShadowingRejected) {
    auto f = frontend("i = 1\nfor i in range(3): pass\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E016");
}

TEST(Checker, RecursionRejected) {
    auto f = frontend("def f(x: int) -> int:\n    return f(x)\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E002");
}

TEST(Checker, PrintInsideFunctionRejected) {
    auto f = frontend("def f(x: int) -> int:\n    print(x)\n    return x\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E002");
}

TEST(Checker, MissingReturnPathIsE017) {
    auto f = frontend("def f(x: int) -> int:\n    if x > 0:\n        return 1\n");
    EXPECT_FALSE(f.typed);
    EXPECT_EQ(f.diags.first_code(), "E017");
}

TEST(Checker, BothArmsReturningIsAccepted) {
    auto tp = cliq::test::typecheck(
        "def sign(x: int) -> int:\n"
        "    if x >= 0:\n"
        "        return 1\n"
        "    else:\n"
        "        return -1\n"
        "s = sign(-5)\n");
    EXPECT_TRUE(tp.functions.count("sign"));
}

TEST(Checker, TypingTotalityOverExpressions) {
    auto tp = cliq::test::typecheck(
        "a = [1, 2, 3, 4]\n"
        "s = 0\n"
        "for i in range(0, len(a)):\n"
        "    s = s + a[i] * 2\n"
        "f = s / 2 + abs(-1) - min(3, 4)\n"
        "print(f > 1.0 and True)\n");
    std::vector<const AstNode*> exprs;
    collect_expressions(*tp.root, exprs);
    for (const AstNode* e : exprs) {
        EXPECT_TRUE(tp.type_of(*e) != nullptr) << dump_ast(*e);
    }
}

TEST(Checker, ConstFoldingRecordsValues) {
    auto tp = cliq::test::typecheck("n = 2 + 2\na = [9] * n\nx = len(a)\n");
    EXPECT_TRUE(tp.module_symbols.at("n").is_const);
    EXPECT_EQ(as_int(*tp.module_symbols.at("n").const_value), 4);
    EXPECT_EQ(tp.module_symbols.at("a").type.size, 4);
}

TEST(Checker, MutatedArrayIsNotConst) {
    auto tp = cliq::test::typecheck("a = [1, 2]\na[0] = 5\n");
    EXPECT_TRUE(tp.module_symbols.at("a").array_mutated);
}

TEST(Checker, IntegerLiteralsWrapTo32Bits) {
    auto tp = cliq::test::typecheck("x = 4294967296\ny = 2147483648\n");
    EXPECT_EQ(as_int(*tp.module_symbols.at("x").const_value), 0);
    EXPECT_EQ(as_int(*tp.module_symbols.at("y").const_value), INT32_MIN);
}
