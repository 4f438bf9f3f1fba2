#pragma once

#include "cliq/diagnostics.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cliq {

/// Expression tree of the OpenQASM 3.0 subset documented in
/// docs/qasm_subset.md. Operator spellings are the QASM ones
/// ("&&", "!", "==", ...); unary minus is "-".
struct QasmExpr;
using QasmExprPtr = std::unique_ptr<QasmExpr>;

struct QasmExpr {
    enum class Kind : uint8_t {
        IntLit,
        FloatLit,
        BoolLit,
        Ident,
        Index,   // name[expr]
        Unary,   // op in {"-", "!"}
        Binary,  // arithmetic / comparison / logical
        Call,    // subroutine call
        CastInt,   // int[32](expr)
        CastFloat, // float[64](expr)
    };

    Kind kind;
    int64_t int_val = 0;
    double float_val = 0.0;
    bool bool_val = false;
    std::string name; // Ident/Index/Call name, or operator spelling
    std::vector<QasmExprPtr> args;

    explicit QasmExpr(Kind k) : kind(k) {}
    QasmExprPtr clone() const;
};

bool qasm_expr_equal(const QasmExpr& a, const QasmExpr& b);

struct QasmType {
    enum class Kind : uint8_t { Int, Float, Bool, BitReg, QubitReg, IntArray };
    Kind kind = Kind::Int;
    int32_t size = 0; // BitReg/QubitReg/IntArray

    friend bool operator==(const QasmType&, const QasmType&) = default;
};

struct QasmDecl {
    QasmType type;
    std::string name;
    bool has_init = false;
    std::vector<int64_t> init; // IntArray initializer

    friend bool operator==(const QasmDecl&, const QasmDecl&) = default;
};

/// One gate application: `ctrl(n) @ g reg[i], ...`. Operand order is
/// controls first, then the base gate's targets.
struct QasmGate {
    std::string gate;   // h, x, z, cx
    int ctrl_count = 0; // ctrl(n) modifier; 0 = no modifier
    std::vector<std::pair<std::string, int32_t>> operands;
};

bool qasm_gate_equal(const QasmGate& a, const QasmGate& b);

struct QasmStmt;
using QasmStmtPtr = std::unique_ptr<QasmStmt>;

struct QasmStmt {
    enum class Kind : uint8_t {
        Assign,     // target = a;
        AssignElem, // target[a] = b;
        ExprStmt,   // a;
        If,         // if (a) body else orelse
        While,      // while (a) body
        For,        // for int[32] target in [a : c? : b] body
        Break,
        Continue,
        Return,  // return a;
        Gate,    // gate application
        Measure, // target = measure source;
        Reset,   // reset source;
    };

    Kind kind;
    std::string target;
    std::string source;         // Measure/Reset qubit register
    QasmExprPtr a, b, c;        // c = for step (null means step 1)
    std::vector<QasmStmtPtr> body, orelse;
    QasmGate gate;

    explicit QasmStmt(Kind k) : kind(k) {}
    QasmStmtPtr clone() const;
};

bool qasm_stmt_equal(const QasmStmt& a, const QasmStmt& b);

struct QasmParam {
    QasmType type; // Int/Float/Bool or IntArray (readonly reference)
    std::string name;

    friend bool operator==(const QasmParam&, const QasmParam&) = default;
};

struct QasmDef {
    std::string name;
    std::vector<QasmParam> params;
    QasmType ret;
    std::vector<QasmDecl> locals; // hoisted to the head of the body
    std::vector<QasmStmtPtr> body;

    QasmDef clone() const;
};

bool qasm_def_equal(const QasmDef& a, const QasmDef& b);

/// A whole program: version marker (always 3.0), optional stdgates
/// include, subroutine definitions, global declarations, statements.
struct QasmProgram {
    bool include_stdgates = false;
    std::vector<QasmDef> defs;
    std::vector<QasmDecl> decls;
    std::vector<QasmStmtPtr> stmts;

    int32_t total_qubits() const {
        int32_t n = 0;
        for (const auto& d : decls) {
            if (d.type.kind == QasmType::Kind::QubitReg) n += d.type.size;
        }
        return n;
    }

    QasmProgram clone() const;
};

bool qasm_program_equal(const QasmProgram& a, const QasmProgram& b);

// Expression builders used by the lowering and tests.
QasmExprPtr qasm_int(int64_t v);
QasmExprPtr qasm_ident(std::string name);

} // namespace cliq
