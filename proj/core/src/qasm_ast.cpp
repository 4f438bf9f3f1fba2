#include "cliq/qasm_ast.hpp"

namespace cliq {

QasmExprPtr QasmExpr::clone() const {
    auto out = std::make_unique<QasmExpr>(kind);
    out->int_val = int_val;
    out->float_val = float_val;
    out->bool_val = bool_val;
    out->name = name;
    out->args.reserve(args.size());
    for (const auto& a : args) out->args.push_back(a->clone());
    return out;
}

bool qasm_expr_equal(const QasmExpr& a, const QasmExpr& b) {
    if (a.kind != b.kind || a.int_val != b.int_val || a.float_val != b.float_val ||
        a.bool_val != b.bool_val || a.name != b.name || a.args.size() != b.args.size())
        return false;
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (!qasm_expr_equal(*a.args[i], *b.args[i])) return false;
    }
    return true;
}

bool qasm_gate_equal(const QasmGate& a, const QasmGate& b) {
    return a.gate == b.gate && a.ctrl_count == b.ctrl_count && a.operands == b.operands;
}

QasmStmtPtr QasmStmt::clone() const {
    auto out = std::make_unique<QasmStmt>(kind);
    out->target = target;
    out->source = source;
    if (a) out->a = a->clone();
    if (b) out->b = b->clone();
    if (c) out->c = c->clone();
    for (const auto& s : body) out->body.push_back(s->clone());
    for (const auto& s : orelse) out->orelse.push_back(s->clone());
    out->gate = gate;
    return out;
}

namespace {

bool opt_expr_equal(const QasmExprPtr& a, const QasmExprPtr& b) {
    if (static_cast<bool>(a) != static_cast<bool>(b)) return false;
    return !a || qasm_expr_equal(*a, *b);
}

bool stmt_list_equal(const std::vector<QasmStmtPtr>& a, const std::vector<QasmStmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!qasm_stmt_equal(*a[i], *b[i])) return false;
    }
    return true;
}

} // namespace

bool qasm_stmt_equal(const QasmStmt& a, const QasmStmt& b) {
    return a.kind == b.kind && a.target == b.target && a.source == b.source &&
           opt_expr_equal(a.a, b.a) && opt_expr_equal(a.b, b.b) && opt_expr_equal(a.c, b.c) &&
           stmt_list_equal(a.body, b.body) && stmt_list_equal(a.orelse, b.orelse) &&
           qasm_gate_equal(a.gate, b.gate);
}

QasmDef QasmDef::clone() const {
    QasmDef out;
    out.name = name;
    out.params = params;
    out.ret = ret;
    out.locals = locals;
    for (const auto& s : body) out.body.push_back(s->clone());
    return out;
}

bool qasm_def_equal(const QasmDef& a, const QasmDef& b) {
    return a.name == b.name && a.params == b.params && a.ret == b.ret && a.locals == b.locals &&
           stmt_list_equal(a.body, b.body);
}

QasmProgram QasmProgram::clone() const {
    QasmProgram out;
    out.include_stdgates = include_stdgates;
    for (const auto& d : defs) out.defs.push_back(d.clone());
    out.decls = decls;
    for (const auto& s : stmts) out.stmts.push_back(s->clone());
    return out;
}

bool qasm_program_equal(const QasmProgram& a, const QasmProgram& b) {
    if (a.include_stdgates != b.include_stdgates || a.defs.size() != b.defs.size() ||
        a.decls != b.decls)
        return false;
    for (size_t i = 0; i < a.defs.size(); ++i) {
        if (!qasm_def_equal(a.defs[i], b.defs[i])) return false;
    }
    return stmt_list_equal(a.stmts, b.stmts);
}

QasmExprPtr qasm_int(int64_t v) {
    auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::IntLit);
    e->int_val = v;
    return e;
}

QasmExprPtr qasm_ident(std::string name) {
    auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::Ident);
    e->name = std::move(name);
    return e;
}

} // namespace cliq
