#pragma once

#include "cliq/diagnostics.hpp"
#include "cliq/grover.hpp"
#include "cliq/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cliq {

enum class NodeKind : uint8_t {
    Module,
    FuncDef,
    Assign,
    AugAssign,
    If,
    While,
    ForRange,
    Break,
    Continue,
    Return,
    ExprStmt,
    BinOp,
    UnaryOp,
    Compare,
    BoolOp,
    Call,
    Name,
    IntLit,
    FloatLit,
    BoolLit,
    ArrayLit,
    Index,
    QuantumBlock, // introduced by the optimizer, never by the parser
};

const char* node_kind_name(NodeKind kind);

struct AstNode;
using AstPtr = std::unique_ptr<AstNode>;

struct ParamDecl {
    std::string name;
    CliqType type;
    Span span;

    friend bool operator==(const ParamDecl& a, const ParamDecl& b) {
        return a.name == b.name && a.type == b.type;
    }
};

/// Payload of a QuantumBlock statement: everything needed to emit the
/// amplitude-amplification subroutine and its classical fallback.
struct QuantumBlockInfo {
    GroverParams params;
    std::string array_name;
    std::string found_name;
    std::vector<int32_t> array_values;
    int32_t target_value = 0;
    std::string target_text; // source rendering of the target operand

    friend bool operator==(const QuantumBlockInfo&, const QuantumBlockInfo&) = default;
};

/// Uniform syntax-tree node. Child layout by kind:
///   Module     children = statements
///   FuncDef    str_attr = name, params/ret_type set, children = body
///   Assign     children = [target, value]; target is Name or Index
///   AugAssign  str_attr = op ("+","-","*","/","//","%"), children = [target, value]
///   If         children = [cond, then..., else...], int_attr = #then
///   While      children = [cond, body...]
///   ForRange   str_attr = loop var, children = [start, stop, step, body...]
///   Return     children = [] or [value]
///   ExprStmt   children = [expr]
///   BinOp      str_attr = op ("+","-","*","/","//","%","**"), children = [l, r]
///   UnaryOp    str_attr = "-" or "not", children = [operand]
///   Compare    str_attr = "==","!=","<","<=",">",">=", children = [l, r]
///   BoolOp     str_attr = "and"/"or", children = [l, r]
///   Call       str_attr = callee, children = arguments
///   Name       str_attr = identifier
///   IntLit     int_attr (already wrapped to 32 bits)
///   FloatLit   float_attr
///   BoolLit    bool_attr
///   ArrayLit   children = elements
///   Index      children = [base(Name), index]
///   QuantumBlock  quantum payload set, no children
struct AstNode {
    NodeKind kind;
    Span span;
    std::string str_attr;
    int64_t int_attr = 0;
    double float_attr = 0.0;
    bool bool_attr = false;
    bool synthetic = false; // node invented by the parser (e.g. implicit range start)
    std::vector<AstPtr> children;
    std::unique_ptr<QuantumBlockInfo> quantum;

    // FuncDef only.
    std::vector<ParamDecl> params;
    std::optional<CliqType> ret_type;

    explicit AstNode(NodeKind k, Span s = {}) : kind(k), span(s) {}

    AstPtr clone() const;

    const AstNode& child(size_t i) const { return *children[i]; }
    AstNode& child(size_t i) { return *children[i]; }

    // If helpers (children = [cond, then..., else...]).
    size_t then_count() const { return static_cast<size_t>(int_attr); }
    size_t else_count() const { return children.size() - 1 - then_count(); }
};

AstPtr make_node(NodeKind kind, Span span = {});

/// Structural equality ignoring spans and the synthetic flag.
bool structurally_equal(const AstNode& a, const AstNode& b);

/// Compact single-line rendering, used in tests and no-match reasons.
std::string dump_ast(const AstNode& node);

} // namespace cliq
