#include "cliq/interpreter.hpp"

#include <cmath>
#include <unordered_map>

namespace cliq {

namespace {

struct RuntimeError {}; // diagnostics already recorded

enum class Flow : uint8_t { Normal, Break, Continue, Return };

struct RefInterpreter {
    const TypedProgram& tp;
    Diagnostics& diags;

    std::map<std::string, Value> globals;
    std::map<std::string, std::vector<int32_t>> arrays;
    std::map<std::string, Value>* locals = nullptr; // function scope
    std::vector<std::pair<std::string, int32_t>> loop_vars;

    std::unordered_map<const AstNode*, size_t> print_index;
    std::vector<Value> outputs;
    Value return_value = int32_t{0};
    uint64_t fuel = kExecutionFuel;

    struct OverrideState {
        const SearchOverride* spec;
        size_t next = 0;
    };
    std::unordered_map<const AstNode*, OverrideState> overrides;

    RefInterpreter(const TypedProgram& t, Diagnostics& d,
                   const std::vector<SearchOverride>& ovs)
        : tp(t), diags(d) {
        for (const auto& o : ovs) overrides.emplace(o.init_stmt, OverrideState{&o, 0});
    }

    [[noreturn]] void fail(const std::string& msg, Span span) {
        diags.error("E060", msg, span);
        throw RuntimeError{};
    }

    void burn(const AstNode& at) {
        if (fuel-- == 0) fail("execution step limit exceeded", at.span);
    }

    ExecutionResult run() {
        // Zero-initialize every module symbol, matching the lowered
        // program where declarations are hoisted with default values.
        for (const auto& [name, sym] : tp.module_symbols) {
            if (sym.type.is_array()) {
                arrays[name] = sym.array_init;
            } else {
                globals[name] = zero_of(sym.type);
            }
        }
        for (size_t i = 0; i < tp.print_sites.size(); ++i) {
            print_index[tp.print_sites[i]] = i;
        }
        outputs.clear();
        for (const AstNode* site : tp.print_sites) {
            outputs.push_back(zero_of(*tp.type_of(*site)));
        }

        exec_block(tp.root->children, 0, tp.root->children.size());

        ExecutionResult result;
        result.mode = ExecutionResult::Mode::Classical;
        Branch b;
        b.probability = 1.0;
        b.outputs = outputs;
        b.final_scalars = globals;
        result.branches.push_back(std::move(b));
        return result;
    }

    static Value zero_of(const CliqType& t) {
        if (t.is_float()) return 0.0;
        if (t.is_bool()) return false;
        return int32_t{0};
    }

    // ---- statements ----

    Flow exec_block(const std::vector<AstPtr>& stmts, size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            const AstNode& s = *stmts[i];
            // Search-block override: skip [init, loop] and force the result.
            auto ov = overrides.find(&s);
            if (ov != overrides.end()) {
                OverrideState& st = ov->second;
                if (st.next >= st.spec->values.size())
                    fail("internal: search override value list exhausted", s.span);
                set_scalar(st.spec->found_name, st.spec->values[st.next++], s.span);
                ++i; // skip the matched loop statement as well
                continue;
            }
            Flow f = exec_stmt(s);
            if (f != Flow::Normal) return f;
        }
        return Flow::Normal;
    }

    Flow exec_stmt(const AstNode& s) {
        burn(s);
        switch (s.kind) {
        case NodeKind::Assign: {
            const AstNode& target = s.child(0);
            const AstNode& rhs = s.child(1);
            if (target.kind == NodeKind::Name && tp.type_of(rhs) && tp.type_of(rhs)->is_array()) {
                // Array declaration: the constant contents were computed at
                // check time and installed before execution started.
                return Flow::Normal;
            }
            Value v = eval(rhs);
            if (target.kind == NodeKind::Name) {
                set_scalar(target.str_attr, v, s.span);
            } else {
                store_element(target, v);
            }
            return Flow::Normal;
        }
        case NodeKind::AugAssign: {
            const AstNode& target = s.child(0);
            Value rhs = eval(s.child(1));
            if (target.kind == NodeKind::Name) {
                Value cur = load_scalar(target.str_attr, target.span);
                set_scalar(target.str_attr, binop(s.str_attr, cur, rhs, s.span), s.span);
            } else {
                Value cur = load_element(target);
                store_element(target, binop(s.str_attr, cur, rhs, s.span));
            }
            return Flow::Normal;
        }
        case NodeKind::If: {
            bool cond = as_bool(eval(s.child(0)));
            size_t then_end = 1 + s.then_count();
            if (cond) return exec_range(s, 1, then_end);
            return exec_range(s, then_end, s.children.size());
        }
        case NodeKind::While: {
            while (true) {
                burn(s);
                if (!as_bool(eval(s.child(0)))) break;
                Flow f = exec_range(s, 1, s.children.size());
                if (f == Flow::Break) break;
                if (f == Flow::Return) return f;
            }
            return Flow::Normal;
        }
        case NodeKind::ForRange: {
            int64_t start = as_int(eval(s.child(0)));
            int64_t stop = as_int(eval(s.child(1)));
            int64_t step = as_int(eval(s.child(2)));
            loop_vars.emplace_back(s.str_attr, 0);
            Flow result = Flow::Normal;
            for (int64_t v = start; step > 0 ? v < stop : v > stop; v += step) {
                burn(s);
                loop_vars.back().second = static_cast<int32_t>(v);
                Flow f = exec_range(s, 3, s.children.size());
                if (f == Flow::Break) break;
                if (f == Flow::Return) {
                    result = f;
                    break;
                }
            }
            loop_vars.pop_back();
            return result;
        }
        case NodeKind::Break: return Flow::Break;
        case NodeKind::Continue: return Flow::Continue;
        case NodeKind::Return:
            return_value = eval(s.child(0));
            return Flow::Return;
        case NodeKind::ExprStmt: {
            const AstNode& e = s.child(0);
            if (e.kind == NodeKind::Call && e.str_attr == "print") {
                Value v = eval(e.child(0));
                outputs[print_index.at(&e)] = v;
                return Flow::Normal;
            }
            eval(e);
            return Flow::Normal;
        }
        case NodeKind::QuantumBlock:
            fail("internal: quantum block reached the classical interpreter", s.span);
        default: fail("internal: unexpected statement", s.span);
        }
    }

    // Executes children [begin, end) of a structured statement.
    Flow exec_range(const AstNode& s, size_t begin, size_t end) {
        // Overrides target statement positions inside child lists, so reuse
        // exec_block on a temporary view.
        return exec_block(s.children, begin, end);
    }

    // ---- variables ----

    int32_t* find_loop_var(const std::string& name) {
        for (auto it = loop_vars.rbegin(); it != loop_vars.rend(); ++it) {
            if (it->first == name) return &it->second;
        }
        return nullptr;
    }

    Value load_scalar(const std::string& name, Span span) {
        if (int32_t* lv = find_loop_var(name)) return *lv;
        if (locals) {
            auto it = locals->find(name);
            if (it != locals->end()) return it->second;
            fail("internal: unbound local '" + name + "'", span);
        }
        auto it = globals.find(name);
        if (it == globals.end()) fail("internal: unbound name '" + name + "'", span);
        return it->second;
    }

    void set_scalar(const std::string& name, Value v, Span span) {
        if (locals) {
            (*locals)[name] = v;
            return;
        }
        auto it = globals.find(name);
        if (it == globals.end()) fail("internal: unbound name '" + name + "'", span);
        it->second = v;
    }

    std::vector<int32_t>& array_of(const AstNode& name_node) {
        auto it = arrays.find(name_node.str_attr);
        if (it == arrays.end())
            fail("internal: unbound array '" + name_node.str_attr + "'", name_node.span);
        return it->second;
    }

    Value load_element(const AstNode& index_node) {
        std::vector<int32_t>& arr = array_of(index_node.child(0));
        int32_t i = as_int(eval(index_node.child(1)));
        if (i < 0 || static_cast<size_t>(i) >= arr.size()) {
            fail("array index " + std::to_string(i) + " out of bounds for size " +
                     std::to_string(arr.size()),
                 index_node.span);
        }
        return arr[static_cast<size_t>(i)];
    }

    void store_element(const AstNode& index_node, Value v) {
        std::vector<int32_t>& arr = array_of(index_node.child(0));
        int32_t i = as_int(eval(index_node.child(1)));
        if (i < 0 || static_cast<size_t>(i) >= arr.size()) {
            fail("array index " + std::to_string(i) + " out of bounds for size " +
                     std::to_string(arr.size()),
                 index_node.span);
        }
        arr[static_cast<size_t>(i)] = as_int(v);
    }

    // ---- expressions ----

    Value eval(const AstNode& e) {
        burn(e);
        switch (e.kind) {
        case NodeKind::IntLit: return static_cast<int32_t>(e.int_attr);
        case NodeKind::FloatLit: return e.float_attr;
        case NodeKind::BoolLit: return e.bool_attr;
        case NodeKind::Name: return load_scalar(e.str_attr, e.span);
        case NodeKind::Index: return load_element(e);
        case NodeKind::UnaryOp: {
            if (e.str_attr == "not") return !as_bool(eval(e.child(0)));
            Value v = eval(e.child(0));
            if (is_int(v)) return num::wrap_neg(as_int(v));
            return -as_float(v);
        }
        case NodeKind::BinOp: {
            Value l = eval(e.child(0));
            Value r = eval(e.child(1));
            return binop(e.str_attr, l, r, e.span);
        }
        case NodeKind::Compare: {
            Value l = eval(e.child(0));
            Value r = eval(e.child(1));
            return compare(e.str_attr, l, r);
        }
        case NodeKind::BoolOp: {
            bool l = as_bool(eval(e.child(0)));
            if (e.str_attr == "and") return l ? eval(e.child(1)) : Value{false};
            return l ? Value{true} : eval(e.child(1));
        }
        case NodeKind::Call: return eval_call(e);
        default: fail("internal: unexpected expression", e.span);
        }
    }

    Value binop(const std::string& op, Value l, Value r, Span span) {
        bool int_op = is_int(l) && is_int(r);
        if (op == "+") {
            if (int_op) return num::wrap_add(as_int(l), as_int(r));
            return widen(l) + widen(r);
        }
        if (op == "-") {
            if (int_op) return num::wrap_sub(as_int(l), as_int(r));
            return widen(l) - widen(r);
        }
        if (op == "*") {
            if (int_op) return num::wrap_mul(as_int(l), as_int(r));
            return widen(l) * widen(r);
        }
        if (op == "/") {
            double d = widen(r);
            if (d == 0.0) fail("division by zero", span);
            return widen(l) / d;
        }
        if (op == "//") {
            if (as_int(r) == 0) fail("integer division by zero", span);
            return num::floor_div(as_int(l), as_int(r));
        }
        if (op == "%") {
            if (as_int(r) == 0) fail("integer modulo by zero", span);
            return num::floor_mod(as_int(l), as_int(r));
        }
        if (op == "**") {
            if (int_op) {
                if (as_int(r) < 0) fail("negative integer exponent", span);
                return num::pow_wrap(as_int(l), as_int(r));
            }
            return std::pow(widen(l), widen(r));
        }
        fail("internal: unknown operator '" + op + "'", span);
    }

    Value compare(const std::string& op, Value l, Value r) {
        bool result;
        if (is_bool(l) && is_bool(r)) {
            result = op == "==" ? as_bool(l) == as_bool(r) : as_bool(l) != as_bool(r);
        } else if (is_int(l) && is_int(r)) {
            int32_t a = as_int(l), b = as_int(r);
            if (op == "==") result = a == b;
            else if (op == "!=") result = a != b;
            else if (op == "<") result = a < b;
            else if (op == "<=") result = a <= b;
            else if (op == ">") result = a > b;
            else result = a >= b;
        } else {
            double a = widen(l), b = widen(r);
            if (op == "==") result = a == b;
            else if (op == "!=") result = a != b;
            else if (op == "<") result = a < b;
            else if (op == "<=") result = a <= b;
            else if (op == ">") result = a > b;
            else result = a >= b;
        }
        return result;
    }

    Value eval_call(const AstNode& e) {
        const std::string& name = e.str_attr;
        if (name == "len") {
            return static_cast<int32_t>(array_of(e.child(0)).size());
        }
        if (name == "abs") {
            Value v = eval(e.child(0));
            if (is_int(v)) {
                int32_t x = as_int(v);
                return x < 0 ? num::wrap_neg(x) : x;
            }
            return std::fabs(as_float(v));
        }
        if (name == "min" || name == "max") {
            Value a = eval(e.child(0));
            Value b = eval(e.child(1));
            if (is_int(a) && is_int(b)) {
                int32_t x = as_int(a), y = as_int(b);
                return name == "min" ? std::min(x, y) : std::max(x, y);
            }
            double x = widen(a), y = widen(b);
            return name == "min" ? std::min(x, y) : std::max(x, y);
        }
        if (name == "sum") {
            int32_t acc = 0;
            for (int32_t v : array_of(e.child(0))) acc = num::wrap_add(acc, v);
            return acc;
        }

        const FuncInfo& f = tp.functions.at(name);
        std::map<std::string, Value> frame;
        for (size_t i = 0; i < e.children.size(); ++i) {
            frame[f.def->params[i].name] = eval(e.child(i));
        }
        auto* saved_locals = locals;
        auto saved_loops = std::move(loop_vars);
        loop_vars.clear();
        locals = &frame;

        Flow flow = exec_block(f.def->children, 0, f.def->children.size());

        locals = saved_locals;
        loop_vars = std::move(saved_loops);
        if (flow != Flow::Return) {
            fail("function '" + name + "' ended without returning a value", e.span);
        }
        return return_value;
    }
};

} // namespace

std::optional<ExecutionResult> reference_eval(const TypedProgram& tp, Diagnostics& diags,
                                              const std::vector<SearchOverride>& overrides) {
    RefInterpreter interp(tp, diags, overrides);
    try {
        return interp.run();
    } catch (const RuntimeError&) {
        return std::nullopt;
    }
}

} // namespace cliq
