#include "cliq/lowering.hpp"

#include "cliq/qasm_parser.hpp"
#include "cliq/qplp.hpp"
#include "cliq/value.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cliq {

namespace {

struct LowerError {}; // diagnostics already recorded

struct Rendered {
    std::string text;
    std::string sig; // "int", "float", "bool"
};

std::string sig_of(const CliqType& t) { return signature_name(t); }

struct Lowerer {
    const TypedProgram& tp;
    const MappingRuleSet& rules;
    Diagnostics& diags;

    std::vector<std::string> decl_lines;
    std::set<std::string> declared;
    std::vector<std::string> helper_def_texts;
    std::set<std::string> helpers_emitted;
    bool any_quantum = false;
    int site_counter = 0;
    std::unordered_map<const AstNode*, size_t> print_index;

    bool in_function = false;

    Lowerer(const TypedProgram& t, const MappingRuleSet& r, Diagnostics& d)
        : tp(t), rules(r), diags(d) {
        for (size_t i = 0; i < tp.print_sites.size(); ++i) print_index[tp.print_sites[i]] = i;
    }

    [[noreturn]] void fail(const std::string& code, const std::string& msg, Span span) {
        diags.error(code, msg, span);
        throw LowerError{};
    }

    // ---- mapping access ----

    std::string instantiate(const std::string& kind, const std::vector<std::string>& sig,
                            const std::vector<std::string>& positional,
                            const std::map<std::string, std::string>& named, Span span) {
        const MappingRule* rule = rules.lookup(kind, sig);
        if (!rule) {
            std::string s;
            for (size_t i = 0; i < sig.size(); ++i) {
                if (i) s += ",";
                s += sig[i];
            }
            fail("E023", "no applicable mapping rule for (" + kind + ", [" +
                             (sig.empty() ? "-" : s) + "])",
                 span);
        }
        std::string error;
        auto out = instantiate_template(rule->template_text, positional, named, &error);
        if (!out) fail("E030", "mapping template '" + kind + "': " + error, span);
        return *out;
    }

    std::string int_literal(int32_t v, Span span) {
        return instantiate("lit.int", {}, {std::to_string(v)}, {}, span);
    }

    // ---- program assembly ----

    std::optional<QasmProgram> run() {
        std::vector<std::string> stmt_blocks;
        for (const auto& stmt : tp.root->children) {
            if (stmt->kind == NodeKind::FuncDef) continue;
            std::string block = lower_stmt(*stmt);
            if (!block.empty()) stmt_blocks.push_back(std::move(block));
        }

        std::vector<std::string> user_defs = lower_functions();

        std::ostringstream text;
        text << "OPENQASM 3.0;\n";
        if (any_quantum) text << "include \"stdgates.inc\";\n";
        for (const auto& d : helper_def_texts) text << d << "\n";
        for (const auto& d : user_defs) text << d << "\n";
        for (const auto& d : decl_lines) text << d << "\n";
        for (const auto& b : stmt_blocks) text << b << "\n";

        Diagnostics inner;
        auto program = parse_qasm(text.str(), inner);
        if (!program) {
            diags.error("E030", "lowering produced invalid OpenQASM: " + inner.first_error());
            return std::nullopt;
        }
        return program;
    }

    // Subroutines are emitted callee-first (the checker already rejected
    // recursion), keeping source order among independent functions.
    std::vector<std::string> lower_functions() {
        std::vector<const AstNode*> defs;
        for (const auto& stmt : tp.root->children) {
            if (stmt->kind == NodeKind::FuncDef) defs.push_back(stmt.get());
        }
        std::vector<std::string> out;
        std::set<std::string> emitted;
        bool progress = true;
        while (out.size() < defs.size() && progress) {
            progress = false;
            for (const AstNode* def : defs) {
                if (emitted.count(def->str_attr)) continue;
                std::set<std::string> callees;
                collect_user_calls(*def, callees);
                bool ready = true;
                for (const auto& c : callees) {
                    if (c != def->str_attr && !emitted.count(c)) ready = false;
                }
                if (!ready) continue;
                out.push_back(lower_function(*def));
                emitted.insert(def->str_attr);
                progress = true;
            }
        }
        return out;
    }

    void collect_user_calls(const AstNode& node, std::set<std::string>& out) {
        if (node.kind == NodeKind::Call && tp.functions.count(node.str_attr))
            out.insert(node.str_attr);
        for (const auto& c : node.children) collect_user_calls(*c, out);
    }

    static std::string qasm_scalar_type(const CliqType& t) {
        if (t.is_float()) return "float[64]";
        if (t.is_bool()) return "bool";
        return "int[32]";
    }

    std::string lower_function(const AstNode& def) {
        const FuncInfo& info = tp.functions.at(def.str_attr);

        std::ostringstream out;
        out << "def " << def.str_attr << "(";
        for (size_t i = 0; i < def.params.size(); ++i) {
            if (i) out << ", ";
            out << qasm_scalar_type(def.params[i].type) << " " << def.params[i].name;
        }
        out << ") -> " << qasm_scalar_type(*def.ret_type) << " {\n";

        in_function = true;

        // Hoist local declarations in first-assignment order.
        std::vector<std::pair<uint32_t, std::string>> locals;
        for (const auto& [name, sym] : info.locals) {
            locals.emplace_back(sym.decl_span.begin, "  " + decl_text(name, sym.type, def.span));
        }
        std::sort(locals.begin(), locals.end());
        for (const auto& [pos, line] : locals) out << line << "\n";

        for (const auto& stmt : def.children) {
            std::string block = lower_stmt(*stmt);
            if (!block.empty()) out << block << "\n";
        }
        in_function = false;

        out << "}";
        return out.str();
    }

    std::string decl_text(const std::string& name, const CliqType& t, Span span) {
        if (t.is_array()) {
            fail("E030", "internal: array declarations are handled at their initializer", span);
        }
        const char* kind = t.is_float() ? "decl.float" : t.is_bool() ? "decl.bool" : "decl.int";
        return instantiate(kind, {}, {}, {{"name", name}}, span);
    }

    void ensure_global_scalar_decl(const std::string& name, const CliqType& t, Span span) {
        if (declared.count(name)) return;
        decl_lines.push_back(decl_text(name, t, span));
        declared.insert(name);
    }

    // ---- statements ----

    std::string lower_stmt(const AstNode& s) {
        switch (s.kind) {
        case NodeKind::Assign: return lower_assign(s);
        case NodeKind::AugAssign: return lower_aug_assign(s);
        case NodeKind::If: return lower_if(s);
        case NodeKind::While: return lower_while(s);
        case NodeKind::ForRange: return lower_for(s);
        case NodeKind::Break: return instantiate("stmt.break", {}, {}, {}, s.span);
        case NodeKind::Continue: return instantiate("stmt.continue", {}, {}, {}, s.span);
        case NodeKind::Return: {
            Rendered v = render_expr(s.child(0));
            return instantiate("stmt.return", {}, {v.text}, {}, s.span);
        }
        case NodeKind::ExprStmt: return lower_expr_stmt(s);
        case NodeKind::QuantumBlock: return lower_quantum_block(s);
        default:
            fail("E030", std::string("construct has no lowering: ") + node_kind_name(s.kind),
                 s.span);
        }
    }

    std::string lower_assign(const AstNode& s) {
        const AstNode& target = s.child(0);
        const AstNode& rhs = s.child(1);

        if (target.kind == NodeKind::Name && tp.type_of(rhs) && tp.type_of(rhs)->is_array()) {
            // Array declaration with constant contents; hoisted, no statement.
            const SymbolInfo& sym = tp.module_symbols.at(target.str_attr);
            if (!declared.count(target.str_attr)) {
                std::string init = "{";
                for (size_t i = 0; i < sym.array_init.size(); ++i) {
                    if (i) init += ", ";
                    init += std::to_string(sym.array_init[i]);
                }
                init += "}";
                decl_lines.push_back(instantiate(
                    "decl.array", {}, {},
                    {{"name", target.str_attr},
                     {"size", std::to_string(sym.type.size)},
                     {"init", init}},
                    s.span));
                declared.insert(target.str_attr);
            }
            return {};
        }

        Rendered value = render_expr(rhs);
        if (target.kind == NodeKind::Name) {
            if (!in_function) {
                ensure_global_scalar_decl(target.str_attr, *tp.type_of(target), target.span);
            }
            return instantiate("stmt.assign", {}, {},
                               {{"target", target.str_attr}, {"value", value.text}}, s.span);
        }
        Rendered index = render_expr(target.child(1));
        return instantiate("stmt.assign.element", {}, {},
                           {{"target", target.child(0).str_attr},
                            {"index", index.text},
                            {"value", value.text}},
                           s.span);
    }

    std::string lower_aug_assign(const AstNode& s) {
        const AstNode& target = s.child(0);
        Rendered value = render_expr(s.child(1));
        Rendered current;
        if (target.kind == NodeKind::Name) {
            current.text =
                instantiate("expr.name", {}, {target.str_attr}, {}, target.span);
            current.sig = sig_of(*tp.type_of(target));
        } else {
            Rendered idx = render_expr(target.child(1));
            current.text = instantiate("expr.index", {},
                                       {target.child(0).str_attr, idx.text}, {}, target.span);
            current.sig = "int";
        }
        std::string combined = render_binop_text(s.str_attr, current, value, s.span);

        if (target.kind == NodeKind::Name) {
            return instantiate("stmt.assign", {}, {},
                               {{"target", target.str_attr}, {"value", combined}}, s.span);
        }
        Rendered idx = render_expr(target.child(1));
        return instantiate("stmt.assign.element", {}, {},
                           {{"target", target.child(0).str_attr},
                            {"index", idx.text},
                            {"value", combined}},
                           s.span);
    }

    std::string join_block(const AstNode& s, size_t begin, size_t end) {
        std::ostringstream out;
        bool first = true;
        for (size_t i = begin; i < end; ++i) {
            std::string block = lower_stmt(s.child(i));
            if (block.empty()) continue;
            if (!first) out << "\n";
            out << block;
            first = false;
        }
        return out.str();
    }

    std::string lower_if(const AstNode& s) {
        Rendered cond = render_expr(s.child(0));
        std::string body = join_block(s, 1, 1 + s.then_count());
        if (s.else_count() == 0) {
            return instantiate("stmt.if", {}, {cond.text}, {{"body", body}}, s.span);
        }
        std::string orelse = join_block(s, 1 + s.then_count(), s.children.size());
        return instantiate("stmt.if.else", {}, {cond.text},
                           {{"body", body}, {"orelse", orelse}}, s.span);
    }

    std::string lower_while(const AstNode& s) {
        Rendered cond = render_expr(s.child(0));
        std::string body = join_block(s, 1, s.children.size());
        return instantiate("stmt.while", {}, {cond.text}, {{"body", body}}, s.span);
    }

    // range(a, b) is half-open; the emitted OpenQASM range is inclusive,
    // so the end becomes b-1 (constant-folded when known) for positive
    // steps and b+1 for negative ones.
    std::string lower_for(const AstNode& s) {
        const AstNode& start = s.child(0);
        const AstNode& stop = s.child(1);
        const AstNode& step = s.child(2);

        Rendered start_r = render_expr(start);
        int32_t step_val = as_int(*tp.folded_of(step));

        std::string end_text;
        if (const Value* sv = tp.folded_of(stop)) {
            int32_t adjusted = step_val > 0 ? num::wrap_sub(as_int(*sv), 1)
                                            : num::wrap_add(as_int(*sv), 1);
            end_text = int_literal(adjusted, stop.span);
        } else {
            Rendered stop_r = render_expr(stop);
            Rendered one{int_literal(1, stop.span), "int"};
            end_text = step_val > 0 ? render_binop_text("-", stop_r, one, stop.span)
                                    : render_binop_text("+", stop_r, one, stop.span);
        }

        std::string body = join_block(s, 3, s.children.size());
        if (step_val == 1) {
            return instantiate("stmt.for", {}, {start_r.text, end_text},
                               {{"name", s.str_attr}, {"body", body}}, s.span);
        }
        return instantiate("stmt.for.step", {},
                           {start_r.text, int_literal(step_val, step.span), end_text},
                           {{"name", s.str_attr}, {"body", body}}, s.span);
    }

    std::string lower_expr_stmt(const AstNode& s) {
        const AstNode& e = s.child(0);
        if (e.kind == NodeKind::Call && e.str_attr == "print") {
            size_t k = print_index.at(&e);
            std::string out_name = "__out_" + std::to_string(k);
            ensure_global_scalar_decl(out_name, *tp.type_of(e), e.span);
            Rendered value = render_expr(e.child(0));
            return instantiate("stmt.assign", {}, {},
                               {{"target", out_name}, {"value", value.text}}, s.span);
        }
        Rendered value = render_expr(e);
        return instantiate("stmt.expr", {}, {value.text}, {}, s.span);
    }

    std::string lower_quantum_block(const AstNode& s) {
        const QuantumBlockInfo& info = *s.quantum;
        ensure_global_scalar_decl(info.found_name, CliqType::make_int(), s.span);
        auto fragment = instantiate_grover(info, site_counter, diags);
        if (!fragment) throw LowerError{};
        ++site_counter;
        any_quantum = true;
        for (const auto& line : fragment->decl_lines) decl_lines.push_back(line);
        std::ostringstream out;
        for (size_t i = 0; i < fragment->stmt_lines.size(); ++i) {
            if (i) out << "\n";
            out << fragment->stmt_lines[i];
        }
        return out.str();
    }

    // ---- expressions ----

    std::string render_binop_text(const std::string& op, const Rendered& l, const Rendered& r,
                                  Span span) {
        static const std::map<std::string, std::string> op_kind = {
            {"+", "binop.add"}, {"-", "binop.sub"},      {"*", "binop.mul"},
            {"/", "binop.div"}, {"//", "binop.floordiv"}, {"%", "binop.mod"},
        };
        auto it = op_kind.find(op);
        if (it == op_kind.end()) fail("E030", "operator '" + op + "' has no lowering", span);
        return instantiate(it->second, {l.sig, r.sig}, {l.text, r.text}, {}, span);
    }

    Rendered render_expr(const AstNode& e) {
        const CliqType* type = tp.type_of(e);
        std::string sig = type ? sig_of(*type) : "int";
        switch (e.kind) {
        case NodeKind::IntLit:
            return {int_literal(static_cast<int32_t>(e.int_attr), e.span), sig};
        case NodeKind::FloatLit:
            return {instantiate("lit.float", {}, {format_double(e.float_attr)}, {}, e.span), sig};
        case NodeKind::BoolLit:
            return {instantiate("lit.bool", {}, {e.bool_attr ? "true" : "false"}, {}, e.span),
                    sig};
        case NodeKind::Name:
            return {instantiate("expr.name", {}, {e.str_attr}, {}, e.span), sig};
        case NodeKind::Index: {
            Rendered idx = render_expr(e.child(1));
            return {instantiate("expr.index", {}, {e.child(0).str_attr, idx.text}, {}, e.span),
                    sig};
        }
        case NodeKind::UnaryOp: {
            Rendered operand = render_expr(e.child(0));
            const char* kind = e.str_attr == "not" ? "unary.not" : "unary.neg";
            return {instantiate(kind, {operand.sig}, {operand.text}, {}, e.span), sig};
        }
        case NodeKind::BinOp: {
            if (e.str_attr == "**") return render_pow(e);
            Rendered l = render_expr(e.child(0));
            Rendered r = render_expr(e.child(1));
            return {render_binop_text(e.str_attr, l, r, e.span), sig};
        }
        case NodeKind::Compare: {
            static const std::map<std::string, std::string> cmp_kind = {
                {"==", "compare.eq"}, {"!=", "compare.ne"}, {"<", "compare.lt"},
                {"<=", "compare.le"}, {">", "compare.gt"},  {">=", "compare.ge"},
            };
            Rendered l = render_expr(e.child(0));
            Rendered r = render_expr(e.child(1));
            return {instantiate(cmp_kind.at(e.str_attr), {l.sig, r.sig}, {l.text, r.text}, {},
                                e.span),
                    sig};
        }
        case NodeKind::BoolOp: {
            Rendered l = render_expr(e.child(0));
            Rendered r = render_expr(e.child(1));
            const char* kind = e.str_attr == "and" ? "boolop.and" : "boolop.or";
            return {instantiate(kind, {l.sig, r.sig}, {l.text, r.text}, {}, e.span), sig};
        }
        case NodeKind::Call: return render_call(e);
        default:
            fail("E030", std::string("expression has no lowering: ") + node_kind_name(e.kind),
                 e.span);
        }
    }

    // Integer ** with a literal exponent in [0, 8] expands to repeated
    // multiplication (wrapping multiplication is associative mod 2^32, so
    // the chain matches the interpreter's square-and-multiply). Exponent 0
    // keeps the base evaluation alive via (base * 0) + 1.
    Rendered render_pow(const AstNode& e) {
        const CliqType* bt = tp.type_of(e.child(0));
        const Value* exp = tp.folded_of(e.child(1));
        if (!bt || !bt->is_int() || !tp.type_of(e.child(1))->is_int()) {
            fail("E030", "'**' on non-Int operands has no lowering in the emitted subset",
                 e.span);
        }
        if (!exp) fail("E030", "'**' requires a compile-time-constant exponent", e.child(1).span);
        int32_t k = as_int(*exp);
        if (k < 0 || k > 8)
            fail("E030", "'**' exponent must be a literal between 0 and 8", e.child(1).span);

        Rendered base = render_expr(e.child(0));
        if (k == 0) {
            Rendered zero{int_literal(0, e.span), "int"};
            Rendered one{int_literal(1, e.span), "int"};
            Rendered prod{render_binop_text("*", base, zero, e.span), "int"};
            return {render_binop_text("+", prod, one, e.span), "int"};
        }
        Rendered acc = base;
        for (int32_t i = 1; i < k; ++i) {
            acc = {render_binop_text("*", acc, base, e.span), "int"};
        }
        return acc;
    }

    Rendered render_call(const AstNode& e) {
        const std::string& name = e.str_attr;
        const CliqType* type = tp.type_of(e);
        std::string sig = type ? sig_of(*type) : "int";

        if (name == "len") {
            // Arrays are statically sized; len folds at check time.
            const Value* v = tp.folded_of(e);
            return {int_literal(as_int(*v), e.span), "int"};
        }
        if (name == "abs") {
            Rendered arg = render_expr(e.child(0));
            const char* helper = arg.sig == "float" ? "__abs_f" : "__abs_i";
            ensure_helper(helper);
            return {std::string(helper) + "(" + arg.text + ")", arg.sig};
        }
        if (name == "min" || name == "max") {
            Rendered a = render_expr(e.child(0));
            Rendered b = render_expr(e.child(1));
            bool float_result = a.sig == "float" || b.sig == "float";
            std::string helper = std::string("__") + name + (float_result ? "_ff" : "_ii");
            ensure_helper(helper);
            std::string at = float_result && a.sig == "int" ? "float[64](" + a.text + ")" : a.text;
            std::string bt = float_result && b.sig == "int" ? "float[64](" + b.text + ")" : b.text;
            return {helper + "(" + at + ", " + bt + ")", float_result ? "float" : "int"};
        }
        if (name == "sum") {
            const CliqType* at = tp.type_of(e.child(0));
            std::string helper = ensure_sum_helper(at->size);
            return {helper + "(" + e.child(0).str_attr + ")", "int"};
        }
        if (is_builtin_name(name)) {
            fail("E030", "builtin '" + name + "' has no lowering in this position", e.span);
        }

        // User subroutine call.
        std::string out = name + "(";
        for (size_t i = 0; i < e.children.size(); ++i) {
            if (i) out += ", ";
            out += render_expr(e.child(i)).text;
        }
        out += ")";
        return {out, sig};
    }

    // ---- builtin helper subroutines ----

    void ensure_helper(const std::string& name) {
        if (helpers_emitted.count(name)) return;
        helpers_emitted.insert(name);
        helper_def_texts.push_back(helper_text(name));
    }

    static std::string helper_text(const std::string& name) {
        if (name == "__abs_i") {
            return "def __abs_i(int[32] v) -> int[32] {\n"
                   "  if ((v < 0)) {\n    return (0 - v);\n  }\n  return v;\n}";
        }
        if (name == "__abs_f") {
            return "def __abs_f(float[64] v) -> float[64] {\n"
                   "  if ((v < 0.0)) {\n    return (0.0 - v);\n  }\n  return v;\n}";
        }
        if (name == "__min_ii") {
            return "def __min_ii(int[32] a, int[32] b) -> int[32] {\n"
                   "  if ((a < b)) {\n    return a;\n  }\n  return b;\n}";
        }
        if (name == "__max_ii") {
            return "def __max_ii(int[32] a, int[32] b) -> int[32] {\n"
                   "  if ((a > b)) {\n    return a;\n  }\n  return b;\n}";
        }
        if (name == "__min_ff") {
            return "def __min_ff(float[64] a, float[64] b) -> float[64] {\n"
                   "  if ((a < b)) {\n    return a;\n  }\n  return b;\n}";
        }
        if (name == "__max_ff") {
            return "def __max_ff(float[64] a, float[64] b) -> float[64] {\n"
                   "  if ((a > b)) {\n    return a;\n  }\n  return b;\n}";
        }
        return {};
    }

    std::string ensure_sum_helper(int32_t size) {
        std::string name = "__sum_" + std::to_string(size);
        if (!helpers_emitted.count(name)) {
            helpers_emitted.insert(name);
            std::ostringstream out;
            out << "def " << name << "(readonly array[int[32], " << size
                << "] a) -> int[32] {\n  int[32] s;\n  s = 0;\n  for int[32] i in [0:"
                << (size - 1) << "] {\n    s = (s + a[i]);\n  }\n  return s;\n}";
            helper_def_texts.push_back(out.str());
        }
        return name;
    }
};

} // namespace

std::optional<QasmProgram> lower_program(const TypedProgram& tp, const MappingRuleSet& rules,
                                         Diagnostics& diags) {
    Lowerer lowerer(tp, rules, diags);
    try {
        return lowerer.run();
    } catch (const LowerError&) {
        return std::nullopt;
    }
}

} // namespace cliq
