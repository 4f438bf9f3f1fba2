#include "cliq/checker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace cliq {

namespace {

constexpr size_t kMaxErrors = 20;

struct CheckError {}; // aborts the current statement; diagnostics already recorded

bool is_array_literal_rhs(const AstNode& rhs) {
    if (rhs.kind == NodeKind::ArrayLit) return true;
    if (rhs.kind == NodeKind::BinOp && rhs.str_attr == "*" &&
        (rhs.child(0).kind == NodeKind::ArrayLit || rhs.child(1).kind == NodeKind::ArrayLit))
        return true;
    return false;
}

struct Checker {
    Diagnostics& diags;
    TypedProgram tp;
    size_t error_count = 0;

    // Scope of the function currently being checked (params + locals);
    // empty when checking module-level code.
    std::map<std::string, SymbolInfo>* local_scope = nullptr;
    const FuncInfo* current_func = nullptr;
    std::vector<std::pair<std::string, const AstNode*>> loop_vars;
    std::unordered_map<std::string, int> module_assign_counts;

    explicit Checker(Diagnostics& d) : diags(d) {}

    [[noreturn]] void fail(std::string code, std::string msg, Span span) {
        if (error_count < kMaxErrors) diags.error(std::move(code), std::move(msg), span);
        ++error_count;
        throw CheckError{};
    }

    bool run(AstPtr root) {
        tp.root = std::move(root);
        AstNode& mod = *tp.root;

        collect_functions(mod);
        reject_recursion();
        count_module_assignments(mod);

        for (auto& stmt : mod.children) {
            try {
                if (stmt->kind == NodeKind::FuncDef) {
                    check_function(*stmt);
                } else {
                    check_stmt(*stmt, /*depth=*/0);
                }
            } catch (const CheckError&) {
                // continue with the next top-level statement
            }
        }
        return error_count == 0;
    }

    // ---- functions ----

    void collect_functions(const AstNode& mod) {
        for (const auto& stmt : mod.children) {
            if (stmt->kind != NodeKind::FuncDef) continue;
            try {
                if (tp.functions.count(stmt->str_attr)) {
                    fail("E010", "function '" + stmt->str_attr + "' is already defined",
                         stmt->span);
                }
                if (!stmt->ret_type) {
                    fail("E001", "function '" + stmt->str_attr +
                                     "' is missing its return type annotation",
                         stmt->span);
                }
                FuncInfo info;
                info.def = stmt.get();
                info.ret = *stmt->ret_type;
                std::set<std::string> seen;
                for (const auto& p : stmt->params) {
                    if (!seen.insert(p.name).second) {
                        fail("E010", "duplicate parameter '" + p.name + "'", p.span);
                    }
                    info.param_types.push_back(p.type);
                }
                tp.functions.emplace(stmt->str_attr, std::move(info));
            } catch (const CheckError&) {
            }
        }
    }

    void collect_calls(const AstNode& node, std::set<std::string>& out) {
        if (node.kind == NodeKind::Call && tp.functions.count(node.str_attr)) {
            out.insert(node.str_attr);
        }
        for (const auto& c : node.children) collect_calls(*c, out);
    }

    // Direct or mutual recursion cannot be expressed in the OpenQASM
    // subroutine subset, so it is rejected up front.
    void reject_recursion() {
        std::map<std::string, std::set<std::string>> graph;
        for (const auto& [name, info] : tp.functions) {
            collect_calls(*info.def, graph[name]);
        }
        std::set<std::string> done, in_progress;
        std::function<bool(const std::string&)> has_cycle = [&](const std::string& f) {
            if (done.count(f)) return false;
            if (!in_progress.insert(f).second) return true;
            for (const auto& callee : graph[f]) {
                if (has_cycle(callee)) return true;
            }
            in_progress.erase(f);
            done.insert(f);
            return false;
        };
        for (const auto& [name, info] : tp.functions) {
            if (has_cycle(name)) {
                try {
                    fail("E002", "unsupported construct: recursive call involving '" + name + "'",
                         info.def->span);
                } catch (const CheckError&) {
                }
                return;
            }
        }
    }

    // ---- const-ness precomputation ----

    void count_module_assignments(const AstNode& node) {
        if (node.kind == NodeKind::FuncDef) return;
        if (node.kind == NodeKind::Assign && node.child(0).kind == NodeKind::Name) {
            module_assign_counts[node.child(0).str_attr]++;
        }
        if (node.kind == NodeKind::AugAssign && node.child(0).kind == NodeKind::Name) {
            module_assign_counts[node.child(0).str_attr] += 2; // never const
        }
        for (const auto& c : node.children) count_module_assignments(*c);
    }

    // ---- scope helpers ----

    SymbolInfo* find_symbol(const std::string& name) {
        if (local_scope) {
            auto it = local_scope->find(name);
            return it == local_scope->end() ? nullptr : &it->second;
        }
        auto it = tp.module_symbols.find(name);
        return it == tp.module_symbols.end() ? nullptr : &it->second;
    }

    const AstNode* find_loop_var(const std::string& name) {
        for (auto it = loop_vars.rbegin(); it != loop_vars.rend(); ++it) {
            if (it->first == name) return it->second;
        }
        return nullptr;
    }

    // ---- statements ----

    void check_stmt(AstNode& stmt, int depth) {
        switch (stmt.kind) {
        case NodeKind::Assign: check_assign(stmt, depth); return;
        case NodeKind::AugAssign: check_aug_assign(stmt); return;
        case NodeKind::If: {
            CliqType ct = check_expr(stmt.child(0));
            if (!ct.is_bool())
                fail("E013", "condition must be Bool, got " + to_string(ct), stmt.child(0).span);
            for (size_t i = 1; i < stmt.children.size(); ++i) check_stmt(stmt.child(i), depth + 1);
            return;
        }
        case NodeKind::While: {
            CliqType ct = check_expr(stmt.child(0));
            if (!ct.is_bool())
                fail("E013", "condition must be Bool, got " + to_string(ct), stmt.child(0).span);
            for (size_t i = 1; i < stmt.children.size(); ++i) check_stmt(stmt.child(i), depth + 1);
            return;
        }
        case NodeKind::ForRange: check_for(stmt, depth); return;
        case NodeKind::Break:
        case NodeKind::Continue: return;
        case NodeKind::Return: check_return(stmt); return;
        case NodeKind::ExprStmt: check_expr_stmt(stmt); return;
        case NodeKind::QuantumBlock: check_quantum_block(stmt); return;
        case NodeKind::FuncDef:
            fail("E001", "nested function definitions are not supported", stmt.span);
        default: fail("E001", "unexpected statement", stmt.span);
        }
    }

    void check_assign(AstNode& stmt, int depth) {
        AstNode& target = stmt.child(0);
        AstNode& rhs = stmt.child(1);

        if (target.kind == NodeKind::Name && is_array_literal_rhs(rhs)) {
            check_array_declaration(stmt, depth);
            return;
        }

        if (target.kind == NodeKind::Index) {
            // a[i] = v
            CliqType base = check_expr(target.child(0));
            if (!base.is_array())
                fail("E010", "indexed assignment requires an array target", target.span);
            CliqType idx = check_expr(target.child(1));
            if (!idx.is_int()) fail("E010", "array index must be Int", target.child(1).span);
            CliqType val = check_expr(rhs);
            if (!val.is_int()) fail("E010", "array elements are Int", rhs.span);
            tp.types[&target] = CliqType::make_int();
            SymbolInfo* sym = find_symbol(target.child(0).str_attr);
            if (sym) sym->array_mutated = true;
            return;
        }

        // name = expr
        const std::string& name = target.str_attr;
        if (find_loop_var(name))
            fail("E010", "cannot assign to loop variable '" + name + "'", target.span);
        if (tp.functions.count(name))
            fail("E010", "'" + name + "' is a function name", target.span);

        CliqType val = check_expr(rhs);
        if (val.is_array())
            fail("E002", "unsupported construct: whole-array assignment", stmt.span);

        SymbolInfo* sym = find_symbol(name);
        if (sym) {
            if (sym->type != val) {
                fail("E010", "'" + name + "' has type " + to_string(sym->type) +
                                 ", cannot assign " + to_string(val),
                     stmt.span);
            }
        } else {
            SymbolInfo info;
            info.type = val;
            info.decl_span = target.span;
            if (!local_scope && depth == 0 && module_assign_counts[name] == 1) {
                if (const Value* v = tp.folded_of(rhs)) {
                    info.is_const = true;
                    info.const_value = *v;
                }
            }
            scope().emplace(name, std::move(info));
        }
        tp.types[&target] = val;
    }

    std::map<std::string, SymbolInfo>& scope() {
        return local_scope ? *local_scope : tp.module_symbols;
    }

    void check_array_declaration(AstNode& stmt, int depth) {
        AstNode& target = stmt.child(0);
        AstNode& rhs = stmt.child(1);
        const std::string& name = target.str_attr;

        if (local_scope)
            fail("E002", "unsupported construct: arrays inside functions", stmt.span);
        if (depth != 0)
            fail("E015", "array declarations must be top-level statements", stmt.span);
        if (SymbolInfo* prev = find_symbol(name)) {
            if (prev->type.is_array())
                fail("E002", "unsupported construct: arrays cannot be re-initialized", stmt.span);
            fail("E010", "'" + name + "' is already declared with another type", stmt.span);
        }
        if (tp.functions.count(name))
            fail("E010", "'" + name + "' is a function name", stmt.span);

        const AstNode* lit = &rhs;
        int64_t repeat = 1;
        if (rhs.kind == NodeKind::BinOp) {
            // [elems] * count  or  count * [elems]
            const AstNode* count_expr = nullptr;
            if (rhs.child(0).kind == NodeKind::ArrayLit) {
                lit = &rhs.child(0);
                count_expr = &rhs.child(1);
            } else {
                lit = &rhs.child(1);
                count_expr = &rhs.child(0);
            }
            CliqType ct = check_expr(const_cast<AstNode&>(*count_expr));
            if (!ct.is_int())
                fail("E010", "array repetition count must be Int", count_expr->span);
            const Value* folded = tp.folded_of(*count_expr);
            if (!folded)
                fail("E012", "array size is not a compile-time constant", count_expr->span);
            repeat = as_int(*folded);
            if (repeat < 1) fail("E012", "array size must be at least 1", count_expr->span);
        }

        std::vector<int32_t> elems;
        for (const auto& e : lit->children) {
            CliqType et = check_expr(*e);
            if (!et.is_int()) fail("E010", "array elements must be Int", e->span);
            const Value* folded = tp.folded_of(*e);
            if (!folded)
                fail("E015", "array elements must be compile-time constants", e->span);
            elems.push_back(as_int(*folded));
        }
        int64_t total = repeat * static_cast<int64_t>(elems.size());
        if (total > (int64_t{1} << 20))
            fail("E012", "array size exceeds the supported maximum", stmt.span);

        std::vector<int32_t> init;
        init.reserve(static_cast<size_t>(total));
        for (int64_t r = 0; r < repeat; ++r) init.insert(init.end(), elems.begin(), elems.end());

        SymbolInfo info;
        info.type = CliqType::make_array(static_cast<int32_t>(total));
        info.array_init = std::move(init);
        info.decl_span = target.span;
        tp.module_symbols.emplace(name, std::move(info));
        tp.types[&target] = tp.module_symbols[name].type;
        tp.types[&rhs] = tp.module_symbols[name].type;
        if (lit != &rhs) tp.types[lit] = tp.module_symbols[name].type;
        for (const auto& e : lit->children) (void)e; // element types already recorded
    }

    void check_aug_assign(AstNode& stmt) {
        AstNode& target = stmt.child(0);
        AstNode& value = stmt.child(1);
        const std::string& op = stmt.str_attr;

        CliqType target_type;
        if (target.kind == NodeKind::Name) {
            if (find_loop_var(target.str_attr))
                fail("E010", "cannot assign to loop variable '" + target.str_attr + "'",
                     target.span);
            SymbolInfo* sym = find_symbol(target.str_attr);
            if (!sym) fail("E011", "undefined name '" + target.str_attr + "'", target.span);
            if (sym->type.is_array())
                fail("E010", "augmented assignment needs a scalar target", target.span);
            target_type = sym->type;
        } else {
            CliqType base = check_expr(target.child(0));
            if (!base.is_array())
                fail("E010", "indexed assignment requires an array target", target.span);
            CliqType idx = check_expr(target.child(1));
            if (!idx.is_int()) fail("E010", "array index must be Int", target.child(1).span);
            SymbolInfo* sym = find_symbol(target.child(0).str_attr);
            if (sym) sym->array_mutated = true;
            target_type = CliqType::make_int();
        }
        tp.types[&target] = target_type;

        CliqType val = check_expr(value);
        CliqType result = binop_type(op, target_type, val, stmt.span);
        if (result != target_type) {
            fail("E010", "augmented assignment would change '" +
                             (target.kind == NodeKind::Name ? target.str_attr : "element") +
                             "' from " + to_string(target_type) + " to " + to_string(result),
                 stmt.span);
        }
    }

    void check_for(AstNode& stmt, int depth) {
        const std::string& var = stmt.str_attr;
        if (find_symbol(var) || tp.functions.count(var) || find_loop_var(var)) {
            fail("E016", "loop variable '" + var + "' shadows an existing name", stmt.span);
        }
        for (int i = 0; i < 2; ++i) {
            CliqType ct = check_expr(stmt.child(i));
            if (!ct.is_int()) fail("E010", "range bounds must be Int", stmt.child(i).span);
        }
        AstNode& step = stmt.child(2);
        CliqType st = check_expr(step);
        if (!st.is_int()) fail("E010", "range step must be Int", step.span);
        const Value* folded = tp.folded_of(step);
        if (!folded || as_int(*folded) == 0) {
            fail("E014", "range step must be a nonzero compile-time constant", step.span);
        }

        loop_vars.emplace_back(var, &stmt);
        for (size_t i = 3; i < stmt.children.size(); ++i) check_stmt(stmt.child(i), depth + 1);
        loop_vars.pop_back();
    }

    void check_return(AstNode& stmt) {
        if (!current_func) fail("E001", "'return' outside function", stmt.span);
        if (stmt.children.empty()) {
            fail("E010", "function must return a value of type " + to_string(current_func->ret),
                 stmt.span);
        }
        CliqType t = check_expr(stmt.child(0));
        if (t != current_func->ret) {
            fail("E010", "return type mismatch: expected " + to_string(current_func->ret) +
                             ", got " + to_string(t),
                 stmt.child(0).span);
        }
    }

    void check_expr_stmt(AstNode& stmt) {
        AstNode& e = stmt.child(0);
        if (e.kind == NodeKind::Call && e.str_attr == "print") {
            if (local_scope)
                fail("E002", "unsupported construct: print inside a function", e.span);
            if (e.children.size() != 1)
                fail("E010", "print() takes exactly one argument", e.span);
            CliqType at = check_expr(e.child(0));
            if (!at.is_scalar()) fail("E010", "print() takes a scalar value", e.child(0).span);
            tp.types[&e] = at; // watched-expression type, drives the __out declaration
            tp.print_sites.push_back(&e);
            return;
        }
        check_expr(e);
    }

    void check_quantum_block(AstNode& stmt) {
        const QuantumBlockInfo& info = *stmt.quantum;
        SymbolInfo* arr = find_symbol(info.array_name);
        if (!arr || !arr->type.is_array()) {
            fail("E011", "quantum block references unknown array '" + info.array_name + "'",
                 stmt.span);
        }
        SymbolInfo* found = find_symbol(info.found_name);
        if (found) {
            if (!found->type.is_int())
                fail("E010", "quantum block target '" + info.found_name + "' must be Int",
                     stmt.span);
            found->is_const = false;
            found->const_value.reset();
        } else {
            SymbolInfo fi;
            fi.type = CliqType::make_int();
            fi.decl_span = stmt.span;
            tp.module_symbols.emplace(info.found_name, std::move(fi));
        }
    }

    void check_function(AstNode& def) {
        auto it = tp.functions.find(def.str_attr);
        if (it == tp.functions.end()) return; // signature collection already failed
        FuncInfo& info = it->second;

        std::map<std::string, SymbolInfo> locals;
        for (const auto& p : def.params) {
            SymbolInfo si;
            si.type = p.type;
            si.decl_span = p.span;
            locals.emplace(p.name, std::move(si));
        }

        local_scope = &locals;
        current_func = &info;
        auto loops_backup = std::move(loop_vars);
        loop_vars.clear();

        bool ok = true;
        for (auto& stmt : def.children) {
            try {
                check_stmt(*stmt, /*depth=*/1);
            } catch (const CheckError&) {
                ok = false;
            }
        }

        loop_vars = std::move(loops_backup);
        current_func = nullptr;
        local_scope = nullptr;

        std::set<std::string> param_names;
        for (const auto& p : def.params) param_names.insert(p.name);
        for (auto& [name, sym] : locals) {
            if (!param_names.count(name)) info.locals.emplace(name, sym);
        }

        if (ok && !all_paths_return(def.children)) {
            try {
                fail("E017", "function '" + def.str_attr + "': not all control paths return a value",
                     def.span);
            } catch (const CheckError&) {
            }
        }
    }

    // A statement list definitely returns if some statement in it is a
    // Return, or an if/else whose arms both definitely return. Loops are
    // treated conservatively.
    static bool all_paths_return(const std::vector<AstPtr>& body) {
        for (const auto& s : body) {
            if (stmt_returns(*s)) return true;
        }
        return false;
    }

    static bool stmt_returns(const AstNode& s) {
        if (s.kind == NodeKind::Return) return true;
        if (s.kind == NodeKind::If && s.else_count() > 0) {
            size_t tc = s.then_count();
            return arm_returns(s, 1, 1 + tc) && arm_returns(s, 1 + tc, s.children.size());
        }
        return false;
    }

    static bool arm_returns(const AstNode& node, size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            if (stmt_returns(node.child(i))) return true;
        }
        return false;
    }

    // ---- expressions ----

    CliqType check_expr(AstNode& e) {
        CliqType t = check_expr_impl(e);
        tp.types[&e] = t;
        return t;
    }

    CliqType check_expr_impl(AstNode& e) {
        switch (e.kind) {
        case NodeKind::IntLit:
            tp.folded[&e] = static_cast<int32_t>(e.int_attr);
            return CliqType::make_int();
        case NodeKind::FloatLit:
            tp.folded[&e] = e.float_attr;
            return CliqType::make_float();
        case NodeKind::BoolLit:
            tp.folded[&e] = e.bool_attr;
            return CliqType::make_bool();
        case NodeKind::Name: return check_name(e);
        case NodeKind::UnaryOp: return check_unary(e);
        case NodeKind::BinOp: return check_binop(e);
        case NodeKind::Compare: return check_compare(e);
        case NodeKind::BoolOp: return check_boolop(e);
        case NodeKind::Call: return check_call(e);
        case NodeKind::Index: return check_index(e);
        case NodeKind::ArrayLit:
            fail("E002",
                 "unsupported construct: array literals are only allowed when declaring a new "
                 "array variable",
                 e.span);
        default: fail("E001", "unexpected expression", e.span);
        }
    }

    CliqType check_name(AstNode& e) {
        if (find_loop_var(e.str_attr)) return CliqType::make_int();
        SymbolInfo* sym = find_symbol(e.str_attr);
        if (!sym) {
            if (tp.functions.count(e.str_attr))
                fail("E010", "function '" + e.str_attr + "' must be called", e.span);
            fail("E011", "undefined name '" + e.str_attr + "'", e.span);
        }
        if (sym->is_const && sym->const_value) tp.folded[&e] = *sym->const_value;
        return sym->type;
    }

    CliqType check_unary(AstNode& e) {
        CliqType t = check_expr(e.child(0));
        if (e.str_attr == "not") {
            if (!t.is_bool()) fail("E010", "'not' requires a Bool operand", e.span);
            if (const Value* v = tp.folded_of(e.child(0))) tp.folded[&e] = !as_bool(*v);
            return CliqType::make_bool();
        }
        // unary minus
        if (!t.is_numeric()) fail("E010", "unary '-' requires Int or Float", e.span);
        if (const Value* v = tp.folded_of(e.child(0))) {
            if (is_int(*v))
                tp.folded[&e] = num::wrap_neg(as_int(*v));
            else
                tp.folded[&e] = -as_float(*v);
        }
        return t;
    }

    CliqType binop_type(const std::string& op, CliqType l, CliqType r, Span span) {
        if (op == "//" || op == "%") {
            if (!l.is_int() || !r.is_int())
                fail("E010", "operator '" + op + "' requires Int operands", span);
            return CliqType::make_int();
        }
        if (!l.is_numeric() || !r.is_numeric())
            fail("E010", "operator '" + op + "' requires numeric operands", span);
        if (op == "/") return CliqType::make_float();
        if (op == "**") {
            if (l.is_int() && r.is_int()) return CliqType::make_int();
            return CliqType::make_float();
        }
        if (l.is_float() || r.is_float()) return CliqType::make_float();
        return CliqType::make_int();
    }

    CliqType check_binop(AstNode& e) {
        CliqType l = check_expr(e.child(0));
        CliqType r = check_expr(e.child(1));
        CliqType out = binop_type(e.str_attr, l, r, e.span);
        fold_binop(e, out);
        return out;
    }

    void fold_binop(AstNode& e, CliqType out) {
        const Value* lv = tp.folded_of(e.child(0));
        const Value* rv = tp.folded_of(e.child(1));
        if (!lv || !rv) return;
        const std::string& op = e.str_attr;

        if (out.is_int()) {
            int32_t a = as_int(*lv), b = as_int(*rv);
            if (op == "+") tp.folded[&e] = num::wrap_add(a, b);
            else if (op == "-") tp.folded[&e] = num::wrap_sub(a, b);
            else if (op == "*") tp.folded[&e] = num::wrap_mul(a, b);
            else if (op == "//") {
                if (b != 0) tp.folded[&e] = num::floor_div(a, b);
            } else if (op == "%") {
                if (b != 0) tp.folded[&e] = num::floor_mod(a, b);
            } else if (op == "**") {
                if (b >= 0) tp.folded[&e] = num::pow_wrap(a, b);
            }
            return;
        }
        // Float result.
        double a = widen(*lv), b = widen(*rv);
        if (op == "+") tp.folded[&e] = a + b;
        else if (op == "-") tp.folded[&e] = a - b;
        else if (op == "*") tp.folded[&e] = a * b;
        else if (op == "/") {
            if (b != 0.0) tp.folded[&e] = a / b;
        } else if (op == "**") {
            tp.folded[&e] = std::pow(a, b);
        }
    }

    CliqType check_compare(AstNode& e) {
        CliqType l = check_expr(e.child(0));
        CliqType r = check_expr(e.child(1));
        const std::string& op = e.str_attr;
        bool eq_op = op == "==" || op == "!=";
        if (l.is_bool() && r.is_bool()) {
            if (!eq_op) fail("E010", "operator '" + op + "' requires numeric operands", e.span);
        } else if (!(l.is_numeric() && r.is_numeric())) {
            fail("E010", "cannot compare " + to_string(l) + " with " + to_string(r), e.span);
        }
        fold_compare(e);
        return CliqType::make_bool();
    }

    void fold_compare(AstNode& e) {
        const Value* lv = tp.folded_of(e.child(0));
        const Value* rv = tp.folded_of(e.child(1));
        if (!lv || !rv) return;
        const std::string& op = e.str_attr;
        bool result;
        if (is_bool(*lv) && is_bool(*rv)) {
            bool a = as_bool(*lv), b = as_bool(*rv);
            result = op == "==" ? a == b : a != b;
        } else if (is_int(*lv) && is_int(*rv)) {
            int32_t a = as_int(*lv), b = as_int(*rv);
            if (op == "==") result = a == b;
            else if (op == "!=") result = a != b;
            else if (op == "<") result = a < b;
            else if (op == "<=") result = a <= b;
            else if (op == ">") result = a > b;
            else result = a >= b;
        } else {
            double a = widen(*lv), b = widen(*rv);
            if (op == "==") result = a == b;
            else if (op == "!=") result = a != b;
            else if (op == "<") result = a < b;
            else if (op == "<=") result = a <= b;
            else if (op == ">") result = a > b;
            else result = a >= b;
        }
        tp.folded[&e] = result;
    }

    CliqType check_boolop(AstNode& e) {
        CliqType l = check_expr(e.child(0));
        CliqType r = check_expr(e.child(1));
        if (!l.is_bool() || !r.is_bool())
            fail("E010", "'" + e.str_attr + "' requires Bool operands", e.span);
        const Value* lv = tp.folded_of(e.child(0));
        const Value* rv = tp.folded_of(e.child(1));
        if (lv && rv) {
            bool a = as_bool(*lv), b = as_bool(*rv);
            tp.folded[&e] = e.str_attr == "and" ? (a && b) : (a || b);
        } else if (lv) {
            // Short-circuit folding when the left side decides alone.
            bool a = as_bool(*lv);
            if (e.str_attr == "and" && !a) tp.folded[&e] = false;
            if (e.str_attr == "or" && a) tp.folded[&e] = true;
        }
        return CliqType::make_bool();
    }

    CliqType check_call(AstNode& e) {
        const std::string& name = e.str_attr;
        if (name == "print")
            fail("E010", "print() has no value and can only be used as a statement", e.span);
        if (name == "range")
            fail("E010", "range() is only allowed in for loops", e.span);

        if (name == "len") {
            require_arity(e, 1);
            CliqType t = check_expr(e.child(0));
            if (!t.is_array()) fail("E010", "len() requires an array", e.child(0).span);
            tp.folded[&e] = t.size;
            return CliqType::make_int();
        }
        if (name == "abs") {
            require_arity(e, 1);
            CliqType t = check_expr(e.child(0));
            if (!t.is_numeric()) fail("E010", "abs() requires Int or Float", e.child(0).span);
            if (const Value* v = tp.folded_of(e.child(0))) {
                if (is_int(*v)) {
                    int32_t x = as_int(*v);
                    tp.folded[&e] = x < 0 ? num::wrap_neg(x) : x;
                } else {
                    tp.folded[&e] = std::fabs(as_float(*v));
                }
            }
            return t;
        }
        if (name == "min" || name == "max") {
            require_arity(e, 2);
            CliqType a = check_expr(e.child(0));
            CliqType b = check_expr(e.child(1));
            if (!a.is_numeric() || !b.is_numeric())
                fail("E010", name + "() requires Int or Float arguments", e.span);
            bool both_int = a.is_int() && b.is_int();
            const Value* av = tp.folded_of(e.child(0));
            const Value* bv = tp.folded_of(e.child(1));
            if (av && bv) {
                if (both_int) {
                    int32_t x = as_int(*av), y = as_int(*bv);
                    tp.folded[&e] = name == "min" ? std::min(x, y) : std::max(x, y);
                } else {
                    double x = widen(*av), y = widen(*bv);
                    tp.folded[&e] = name == "min" ? std::min(x, y) : std::max(x, y);
                }
            }
            return both_int ? CliqType::make_int() : CliqType::make_float();
        }
        if (name == "sum") {
            require_arity(e, 1);
            CliqType t = check_expr(e.child(0));
            if (!t.is_array()) fail("E010", "sum() requires an array", e.child(0).span);
            return CliqType::make_int();
        }

        auto it = tp.functions.find(name);
        if (it == tp.functions.end()) fail("E011", "undefined function '" + name + "'", e.span);
        const FuncInfo& f = it->second;
        if (e.children.size() != f.param_types.size()) {
            fail("E010", "'" + name + "' expects " + std::to_string(f.param_types.size()) +
                             " argument(s), got " + std::to_string(e.children.size()),
                 e.span);
        }
        for (size_t i = 0; i < e.children.size(); ++i) {
            CliqType at = check_expr(e.child(i));
            if (at != f.param_types[i]) {
                fail("E010", "argument " + std::to_string(i + 1) + " of '" + name +
                                 "': expected " + to_string(f.param_types[i]) + ", got " +
                                 to_string(at),
                     e.child(i).span);
            }
        }
        return f.ret;
    }

    void require_arity(const AstNode& e, size_t n) {
        if (e.children.size() != n) {
            fail("E010", e.str_attr + "() takes exactly " + std::to_string(n) + " argument(s)",
                 e.span);
        }
    }

    CliqType check_index(AstNode& e) {
        CliqType base = check_expr(e.child(0));
        if (!base.is_array())
            fail("E010", "only arrays can be indexed, got " + to_string(base), e.child(0).span);
        CliqType idx = check_expr(e.child(1));
        if (!idx.is_int()) fail("E010", "array index must be Int", e.child(1).span);

        // Fold in-bounds constant lookups into immutable arrays.
        const Value* iv = tp.folded_of(e.child(1));
        if (iv && e.child(0).kind == NodeKind::Name) {
            SymbolInfo* sym = find_symbol(e.child(0).str_attr);
            if (sym && !sym->array_mutated && module_array_never_mutated(e.child(0).str_attr)) {
                int32_t i = as_int(*iv);
                if (i >= 0 && static_cast<size_t>(i) < sym->array_init.size()) {
                    tp.folded[&e] = sym->array_init[static_cast<size_t>(i)];
                }
            }
        }
        return CliqType::make_int();
    }

    // Whole-program mutation check (the walk may not have reached a later
    // element assignment yet).
    bool module_array_never_mutated(const std::string& name) {
        return !array_mutated_in(*tp.root, name);
    }
    static bool array_mutated_in(const AstNode& node, const std::string& name) {
        if ((node.kind == NodeKind::Assign || node.kind == NodeKind::AugAssign) &&
            node.child(0).kind == NodeKind::Index &&
            node.child(0).child(0).str_attr == name)
            return true;
        for (const auto& c : node.children) {
            if (array_mutated_in(*c, name)) return true;
        }
        return false;
    }
};

} // namespace

bool is_builtin_name(const std::string& name) {
    return name == "len" || name == "abs" || name == "min" || name == "max" || name == "sum" ||
           name == "range" || name == "print";
}

std::optional<TypedProgram> check_program(AstPtr root, Diagnostics& diags) {
    Checker checker(diags);
    bool ok = checker.run(std::move(root));
    if (!ok) return std::nullopt;
    return std::move(checker.tp);
}

} // namespace cliq
