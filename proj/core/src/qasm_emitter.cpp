#include "cliq/qasm_emitter.hpp"

#include "cliq/value.hpp"

#include <sstream>

namespace cliq {

namespace {

std::string render_expr(const QasmExpr& e) {
    switch (e.kind) {
    case QasmExpr::Kind::IntLit: return std::to_string(e.int_val);
    case QasmExpr::Kind::FloatLit: return format_double(e.float_val);
    case QasmExpr::Kind::BoolLit: return e.bool_val ? "true" : "false";
    case QasmExpr::Kind::Ident: return e.name;
    case QasmExpr::Kind::Index: return e.name + "[" + render_expr(*e.args[0]) + "]";
    case QasmExpr::Kind::Unary: return "(" + e.name + render_expr(*e.args[0]) + ")";
    case QasmExpr::Kind::Binary:
        return "(" + render_expr(*e.args[0]) + " " + e.name + " " + render_expr(*e.args[1]) + ")";
    case QasmExpr::Kind::Call: {
        std::string out = e.name + "(";
        for (size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += ", ";
            out += render_expr(*e.args[i]);
        }
        return out + ")";
    }
    case QasmExpr::Kind::CastInt: return "int[32](" + render_expr(*e.args[0]) + ")";
    case QasmExpr::Kind::CastFloat: return "float[64](" + render_expr(*e.args[0]) + ")";
    }
    return "?";
}

// Compound expressions carry their own parentheses; wrap the rest so
// statement headers always read "if (...)".
std::string render_condition(const QasmExpr& e) {
    if (e.kind == QasmExpr::Kind::Binary || e.kind == QasmExpr::Kind::Unary)
        return render_expr(e);
    return "(" + render_expr(e) + ")";
}

std::string render_type(const QasmType& t) {
    switch (t.kind) {
    case QasmType::Kind::Int: return "int[32]";
    case QasmType::Kind::Float: return "float[64]";
    case QasmType::Kind::Bool: return "bool";
    case QasmType::Kind::BitReg: return "bit[" + std::to_string(t.size) + "]";
    case QasmType::Kind::QubitReg: return "qubit[" + std::to_string(t.size) + "]";
    case QasmType::Kind::IntArray:
        return "array[int[32], " + std::to_string(t.size) + "]";
    }
    return "?";
}

std::string render_decl(const QasmDecl& d) {
    std::string out = render_type(d.type) + " " + d.name;
    if (d.has_init) {
        out += " = {";
        for (size_t i = 0; i < d.init.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(d.init[i]);
        }
        out += "}";
    }
    return out + ";";
}

struct Writer {
    std::ostringstream out;
    int indent = 0;

    void line(const std::string& text) {
        for (int i = 0; i < indent; ++i) out << "  ";
        out << text << "\n";
    }
};

void render_stmt(Writer& w, const QasmStmt& s);

void render_block(Writer& w, const std::vector<QasmStmtPtr>& body) {
    ++w.indent;
    for (const auto& s : body) render_stmt(w, *s);
    --w.indent;
}

void render_stmt(Writer& w, const QasmStmt& s) {
    switch (s.kind) {
    case QasmStmt::Kind::Assign:
        w.line(s.target + " = " + render_expr(*s.a) + ";");
        return;
    case QasmStmt::Kind::AssignElem:
        w.line(s.target + "[" + render_expr(*s.a) + "] = " + render_expr(*s.b) + ";");
        return;
    case QasmStmt::Kind::ExprStmt:
        w.line(render_expr(*s.a) + ";");
        return;
    case QasmStmt::Kind::If: {
        w.line("if " + render_condition(*s.a) + " {");
        render_block(w, s.body);
        if (s.orelse.empty()) {
            w.line("}");
        } else {
            w.line("} else {");
            render_block(w, s.orelse);
            w.line("}");
        }
        return;
    }
    case QasmStmt::Kind::While:
        w.line("while " + render_condition(*s.a) + " {");
        render_block(w, s.body);
        w.line("}");
        return;
    case QasmStmt::Kind::For: {
        std::string range = "[" + render_expr(*s.a) + ":";
        if (s.c) range += render_expr(*s.c) + ":";
        range += render_expr(*s.b) + "]";
        w.line("for int[32] " + s.target + " in " + range + " {");
        render_block(w, s.body);
        w.line("}");
        return;
    }
    case QasmStmt::Kind::Break: w.line("break;"); return;
    case QasmStmt::Kind::Continue: w.line("continue;"); return;
    case QasmStmt::Kind::Return: w.line("return " + render_expr(*s.a) + ";"); return;
    case QasmStmt::Kind::Gate: {
        std::string out;
        if (s.gate.ctrl_count > 0)
            out += "ctrl(" + std::to_string(s.gate.ctrl_count) + ") @ ";
        out += s.gate.gate + " ";
        for (size_t i = 0; i < s.gate.operands.size(); ++i) {
            if (i) out += ", ";
            out += s.gate.operands[i].first + "[" + std::to_string(s.gate.operands[i].second) + "]";
        }
        w.line(out + ";");
        return;
    }
    case QasmStmt::Kind::Measure:
        w.line(s.target + " = measure " + s.source + ";");
        return;
    case QasmStmt::Kind::Reset:
        w.line("reset " + s.source + ";");
        return;
    }
}

} // namespace

std::string emit_qasm_expr(const QasmExpr& expr) { return render_expr(expr); }

std::string emit_qasm(const QasmProgram& program) {
    Writer w;
    w.line("OPENQASM 3.0;");
    if (program.include_stdgates) w.line("include \"stdgates.inc\";");
    for (const auto& def : program.defs) {
        std::string header = "def " + def.name + "(";
        for (size_t i = 0; i < def.params.size(); ++i) {
            if (i) header += ", ";
            const QasmParam& p = def.params[i];
            if (p.type.kind == QasmType::Kind::IntArray) {
                header += "readonly " + render_type(p.type) + " " + p.name;
            } else {
                header += render_type(p.type) + " " + p.name;
            }
        }
        header += ") -> " + render_type(def.ret) + " {";
        w.line(header);
        ++w.indent;
        for (const auto& d : def.locals) w.line(render_decl(d));
        --w.indent;
        render_block(w, def.body);
        w.line("}");
    }
    for (const auto& d : program.decls) w.line(render_decl(d));
    for (const auto& s : program.stmts) render_stmt(w, *s);
    return w.out.str();
}

} // namespace cliq
