#include "cliq/qasm_interpreter.hpp"

#include "cliq/interpreter.hpp" // kExecutionFuel
#include "cliq/statevector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

namespace cliq {

namespace {

constexpr size_t kMaxBranches = 1 << 14;

struct QasmRuntimeError {}; // diagnostics already recorded

// Thrown by the exact-mode probe when execution reaches a measurement
// beyond the scripted prefix; carries the distribution to branch over.
struct ProbeStop {
    std::string register_name;
    std::vector<double> distribution;
};

enum class Flow : uint8_t { Normal, Break, Continue, Return };

struct QubitRegister {
    StateVector state;
    explicit QubitRegister(int n) : state(n) {}
};

struct Runner {
    const QasmProgram& prog;
    Diagnostics& diags;

    enum class Policy : uint8_t { Script, ScriptStrict, Sample };
    Policy policy = Policy::Script;
    const std::vector<int32_t>* script = nullptr;
    Xorshift64Star* rng = nullptr;

    std::map<std::string, Value> globals;
    std::map<std::string, std::vector<int32_t>> arrays;
    std::map<std::string, int32_t> bit_regs;
    std::map<std::string, int32_t> bit_sizes;
    std::map<std::string, QubitRegister> qubit_regs;
    std::map<std::string, const QasmDef*> defs;

    // Subroutine frame: scalars by value, array params by readonly view.
    struct Frame {
        std::map<std::string, Value> scalars;
        std::map<std::string, const std::vector<int32_t>*> array_views;
    };
    Frame* frame = nullptr;
    std::vector<std::pair<std::string, int32_t>> loop_vars;

    size_t event_index = 0;
    double path_probability = 1.0;
    std::vector<int32_t> outcomes;
    std::vector<std::string> outcome_registers;
    std::vector<std::pair<std::string, std::vector<double>>> event_distributions;
    Value return_value = int32_t{0};
    uint64_t fuel = kExecutionFuel;

    Runner(const QasmProgram& p, Diagnostics& d) : prog(p), diags(d) {}

    [[noreturn]] void fail(const std::string& code, const std::string& msg) {
        diags.error(code, msg);
        throw QasmRuntimeError{};
    }

    void burn() {
        if (fuel-- == 0) fail("E060", "execution step limit exceeded");
    }

    static Value zero_of(const QasmType& t) {
        if (t.kind == QasmType::Kind::Float) return 0.0;
        if (t.kind == QasmType::Kind::Bool) return false;
        return int32_t{0};
    }

    void initialize() {
        int total_qubits = prog.total_qubits();
        if (total_qubits > StateVector::kMaxQubits) {
            fail("E063", "program declares " + std::to_string(total_qubits) +
                             " qubits, exceeding the simulator limit of " +
                             std::to_string(StateVector::kMaxQubits));
        }
        for (const auto& def : prog.defs) defs[def.name] = &def;
        for (const auto& d : prog.decls) {
            switch (d.type.kind) {
            case QasmType::Kind::Int:
            case QasmType::Kind::Float:
            case QasmType::Kind::Bool: globals[d.name] = zero_of(d.type); break;
            case QasmType::Kind::IntArray: {
                std::vector<int32_t> init(static_cast<size_t>(d.type.size), 0);
                if (d.has_init) {
                    for (size_t i = 0; i < d.init.size(); ++i)
                        init[i] = static_cast<int32_t>(d.init[i]);
                }
                arrays[d.name] = std::move(init);
                break;
            }
            case QasmType::Kind::BitReg:
                bit_regs[d.name] = 0;
                bit_sizes[d.name] = d.type.size;
                break;
            case QasmType::Kind::QubitReg:
                qubit_regs.emplace(d.name, QubitRegister(d.type.size));
                break;
            }
        }
    }

    Branch run() {
        initialize();
        for (const auto& s : prog.stmts) {
            Flow f = exec_stmt(*s);
            if (f != Flow::Normal) fail("E060", "internal: control escaped the program body");
        }
        Branch b;
        b.probability = path_probability;
        b.outcomes = outcomes;
        b.outcome_registers = outcome_registers;
        b.outputs = collect_outputs();
        b.final_scalars = globals;
        return b;
    }

    // Final values of the __out_k convention registers, ordered by k.
    std::vector<Value> collect_outputs() {
        std::vector<std::pair<int, Value>> found;
        for (const auto& [name, value] : globals) {
            if (name.rfind("__out_", 0) != 0) continue;
            int k = 0;
            auto [ptr, ec] =
                std::from_chars(name.data() + 6, name.data() + name.size(), k);
            if (ec != std::errc{} || ptr != name.data() + name.size()) continue;
            found.emplace_back(k, value);
        }
        std::sort(found.begin(), found.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Value> out;
        out.reserve(found.size());
        for (auto& [k, v] : found) out.push_back(v);
        return out;
    }

    // ---- statements ----

    Flow exec_stmt(const QasmStmt& s) {
        burn();
        switch (s.kind) {
        case QasmStmt::Kind::Assign: {
            Value v = eval(*s.a);
            write_scalar(s.target, v);
            return Flow::Normal;
        }
        case QasmStmt::Kind::AssignElem: {
            std::vector<int32_t>& arr = writable_array(s.target);
            int32_t i = as_int_value(eval(*s.a), "array index");
            check_bounds(i, arr.size());
            arr[static_cast<size_t>(i)] = as_int_value(eval(*s.b), "array element");
            return Flow::Normal;
        }
        case QasmStmt::Kind::ExprStmt: eval(*s.a); return Flow::Normal;
        case QasmStmt::Kind::If: {
            bool cond = as_bool(eval(*s.a));
            const auto& list = cond ? s.body : s.orelse;
            for (const auto& st : list) {
                Flow f = exec_stmt(*st);
                if (f != Flow::Normal) return f;
            }
            return Flow::Normal;
        }
        case QasmStmt::Kind::While: {
            while (true) {
                burn();
                if (!as_bool(eval(*s.a))) break;
                Flow f = exec_body(s.body);
                if (f == Flow::Break) break;
                if (f == Flow::Return) return f;
            }
            return Flow::Normal;
        }
        case QasmStmt::Kind::For: {
            int64_t start = as_int_value(eval(*s.a), "range start");
            int64_t stop = as_int_value(eval(*s.b), "range end");
            int64_t step = s.c ? as_int_value(eval(*s.c), "range step") : 1;
            if (step == 0) fail("E060", "range step is zero");
            loop_vars.emplace_back(s.target, 0);
            Flow result = Flow::Normal;
            for (int64_t v = start; step > 0 ? v <= stop : v >= stop; v += step) {
                burn();
                loop_vars.back().second = static_cast<int32_t>(v);
                Flow f = exec_body(s.body);
                if (f == Flow::Break) break;
                if (f == Flow::Return) {
                    result = f;
                    break;
                }
            }
            loop_vars.pop_back();
            return result;
        }
        case QasmStmt::Kind::Break: return Flow::Break;
        case QasmStmt::Kind::Continue: return Flow::Continue;
        case QasmStmt::Kind::Return:
            return_value = eval(*s.a);
            return Flow::Return;
        case QasmStmt::Kind::Gate: {
            QubitRegister& reg = qubit_reg(s.gate.operands.front().first);
            std::vector<int> operand_indices;
            operand_indices.reserve(s.gate.operands.size());
            for (const auto& [r, idx] : s.gate.operands) operand_indices.push_back(idx);
            reg.state.apply_gate(s.gate.gate, s.gate.ctrl_count, operand_indices);
            return Flow::Normal;
        }
        case QasmStmt::Kind::Measure: {
            QubitRegister& reg = qubit_reg(s.source);
            std::vector<double> dist = reg.state.probabilities();
            int32_t outcome = choose_outcome(s.source, dist);
            reg.state.collapse_to(outcome);
            bit_regs[s.target] = outcome;
            return Flow::Normal;
        }
        case QasmStmt::Kind::Reset: {
            qubit_reg(s.source).state.reset();
            return Flow::Normal;
        }
        }
        fail("E060", "internal: unknown statement kind");
    }

    Flow exec_body(const std::vector<QasmStmtPtr>& body) {
        for (const auto& st : body) {
            Flow f = exec_stmt(*st);
            if (f != Flow::Normal) return f;
        }
        return Flow::Normal;
    }

    int32_t choose_outcome(const std::string& reg_name, const std::vector<double>& dist) {
        size_t event = event_index++;
        event_distributions.emplace_back(reg_name, dist);
        int32_t outcome = 0;
        switch (policy) {
        case Policy::Script:
            if (script && event < script->size()) {
                outcome = (*script)[event];
            } else {
                throw ProbeStop{reg_name, dist};
            }
            break;
        case Policy::ScriptStrict:
            if (!script || event >= script->size())
                fail("E060", "forced outcome list exhausted at measurement " +
                                 std::to_string(event));
            outcome = (*script)[event];
            break;
        case Policy::Sample: {
            double u = rng->uniform();
            double acc = 0.0;
            int32_t last_positive = -1;
            outcome = static_cast<int32_t>(dist.size()) - 1;
            for (size_t i = 0; i < dist.size(); ++i) {
                if (dist[i] <= 0.0) continue;
                last_positive = static_cast<int32_t>(i);
                acc += dist[i];
                if (u < acc) {
                    outcome = static_cast<int32_t>(i);
                    break;
                }
            }
            if (u >= acc && last_positive >= 0) outcome = last_positive;
            break;
        }
        }
        if (outcome < 0 || static_cast<size_t>(outcome) >= dist.size())
            fail("E060", "measurement outcome out of range");
        path_probability *= dist[static_cast<size_t>(outcome)];
        outcomes.push_back(outcome);
        outcome_registers.push_back(reg_name);
        return outcome;
    }

    // ---- variables ----

    int32_t* find_loop_var(const std::string& name) {
        for (auto it = loop_vars.rbegin(); it != loop_vars.rend(); ++it) {
            if (it->first == name) return &it->second;
        }
        return nullptr;
    }

    Value read_scalar(const std::string& name) {
        if (int32_t* lv = find_loop_var(name)) return *lv;
        if (frame) {
            auto it = frame->scalars.find(name);
            if (it != frame->scalars.end()) return it->second;
            fail("E060", "internal: unbound local '" + name + "'");
        }
        auto it = globals.find(name);
        if (it == globals.end()) fail("E060", "internal: unbound identifier '" + name + "'");
        return it->second;
    }

    void write_scalar(const std::string& name, Value v) {
        if (frame) {
            frame->scalars[name] = v;
            return;
        }
        auto it = globals.find(name);
        if (it == globals.end()) fail("E060", "internal: unbound identifier '" + name + "'");
        it->second = v;
    }

    const std::vector<int32_t>& readable_array(const std::string& name) {
        if (frame) {
            auto it = frame->array_views.find(name);
            if (it != frame->array_views.end()) return *it->second;
            fail("E060", "internal: unbound array '" + name + "'");
        }
        auto it = arrays.find(name);
        if (it == arrays.end()) fail("E060", "internal: unbound array '" + name + "'");
        return it->second;
    }

    std::vector<int32_t>& writable_array(const std::string& name) {
        if (frame) fail("E062", "array parameters are readonly");
        auto it = arrays.find(name);
        if (it == arrays.end()) fail("E060", "internal: unbound array '" + name + "'");
        return it->second;
    }

    QubitRegister& qubit_reg(const std::string& name) {
        auto it = qubit_regs.find(name);
        if (it == qubit_regs.end()) fail("E060", "internal: unbound qubit register '" + name + "'");
        return it->second;
    }

    void check_bounds(int32_t i, size_t size) {
        if (i < 0 || static_cast<size_t>(i) >= size) {
            fail("E060", "array index " + std::to_string(i) + " out of bounds for size " +
                             std::to_string(size));
        }
    }

    int32_t as_int_value(Value v, const char* what) {
        if (!is_int(v)) fail("E060", std::string("internal: ") + what + " is not int[32]");
        return as_int(v);
    }

    // ---- expressions ----

    Value eval(const QasmExpr& e) {
        burn();
        switch (e.kind) {
        case QasmExpr::Kind::IntLit: return static_cast<int32_t>(e.int_val);
        case QasmExpr::Kind::FloatLit: return e.float_val;
        case QasmExpr::Kind::BoolLit: return e.bool_val;
        case QasmExpr::Kind::Ident: return read_scalar(e.name);
        case QasmExpr::Kind::Index: {
            const std::vector<int32_t>& arr = readable_array(e.name);
            int32_t i = as_int_value(eval(*e.args[0]), "array index");
            check_bounds(i, arr.size());
            return arr[static_cast<size_t>(i)];
        }
        case QasmExpr::Kind::Unary: {
            if (e.name == "!") return !as_bool(eval(*e.args[0]));
            Value v = eval(*e.args[0]);
            if (is_int(v)) return num::wrap_neg(as_int(v));
            return -as_float(v);
        }
        case QasmExpr::Kind::Binary: return eval_binary(e);
        case QasmExpr::Kind::Call: return eval_call(e);
        case QasmExpr::Kind::CastInt: {
            const QasmExpr& arg = *e.args[0];
            if (arg.kind == QasmExpr::Kind::Ident) {
                auto it = bit_regs.find(arg.name);
                if (it != bit_regs.end()) return it->second;
            }
            Value v = eval(arg);
            if (is_int(v)) return v;
            if (is_bool(v)) return static_cast<int32_t>(as_bool(v) ? 1 : 0);
            // float -> int truncates toward zero
            return static_cast<int32_t>(as_float(v));
        }
        case QasmExpr::Kind::CastFloat: {
            Value v = eval(*e.args[0]);
            if (is_float(v)) return v;
            if (is_int(v)) return static_cast<double>(as_int(v));
            fail("E062", "cannot cast bool to float[64]");
        }
        }
        fail("E060", "internal: unknown expression kind");
    }

    Value eval_binary(const QasmExpr& e) {
        const std::string& op = e.name;
        if (op == "&&") {
            if (!as_bool(eval(*e.args[0]))) return false;
            return as_bool(eval(*e.args[1]));
        }
        if (op == "||") {
            if (as_bool(eval(*e.args[0]))) return true;
            return as_bool(eval(*e.args[1]));
        }

        Value l = eval(*e.args[0]);
        Value r = eval(*e.args[1]);

        if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") {
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
            // In this subset, int / int is floor division (and / pairs
            // with % as floor modulo); float division is IEEE-754.
            if (int_op) {
                if (as_int(r) == 0) fail("E060", "integer division by zero");
                return num::floor_div(as_int(l), as_int(r));
            }
            double d = widen(r);
            if (d == 0.0) fail("E060", "division by zero");
            return widen(l) / d;
        }
        if (op == "%") {
            if (as_int(r) == 0) fail("E060", "integer modulo by zero");
            return num::floor_mod(as_int(l), as_int(r));
        }
        fail("E060", "internal: unknown operator '" + op + "'");
    }

    Value eval_call(const QasmExpr& e) {
        auto it = defs.find(e.name);
        if (it == defs.end()) fail("E060", "internal: unbound subroutine '" + e.name + "'");
        const QasmDef& def = *it->second;

        Frame next;
        for (size_t i = 0; i < def.params.size(); ++i) {
            const QasmParam& p = def.params[i];
            if (p.type.kind == QasmType::Kind::IntArray) {
                const QasmExpr& arg = *e.args[i];
                if (arg.kind != QasmExpr::Kind::Ident)
                    fail("E062", "array arguments must be array names");
                next.array_views[p.name] = &readable_array(arg.name);
            } else {
                next.scalars[p.name] = eval(*e.args[i]);
            }
        }
        for (const auto& d : def.locals) next.scalars[d.name] = zero_of(d.type);

        Frame* saved = frame;
        auto saved_loops = std::move(loop_vars);
        loop_vars.clear();
        frame = &next;

        Flow flow = Flow::Normal;
        for (const auto& st : def.body) {
            flow = exec_stmt(*st);
            if (flow != Flow::Normal) break;
        }

        frame = saved;
        loop_vars = std::move(saved_loops);
        if (flow != Flow::Return)
            fail("E060", "subroutine '" + e.name + "' ended without returning a value");
        return return_value;
    }
};

} // namespace

std::optional<ExecutionResult> interpret_qasm(const QasmProgram& program,
                                              const QasmExecutionOptions& options,
                                              Diagnostics& diags) {
    try {
        ExecutionResult result;
        result.mode = options.mode;

        switch (options.mode) {
        case ExecutionResult::Mode::Classical:
        case ExecutionResult::Mode::Exact: {
            result.mode = ExecutionResult::Mode::Exact;
            // Depth-first enumeration of the outcome tree; each leaf is one
            // re-execution with a fully scripted outcome prefix.
            std::map<size_t, MeasurementEvent> trace;
            std::function<void(std::vector<int32_t>, double)> explore =
                [&](std::vector<int32_t> script, double prefix_prob) {
                    Runner runner(program, diags);
                    runner.policy = Runner::Policy::Script;
                    runner.script = &script;
                    try {
                        Branch branch = runner.run();
                        if (result.branches.size() >= kMaxBranches) {
                            diags.error("E060", "measurement outcome tree is too large");
                            throw QasmRuntimeError{};
                        }
                        result.branches.push_back(std::move(branch));
                    } catch (const ProbeStop& stop) {
                        size_t depth = script.size();
                        MeasurementEvent& ev = trace[depth];
                        ev.register_name = stop.register_name;
                        if (ev.distribution.size() < stop.distribution.size())
                            ev.distribution.resize(stop.distribution.size(), 0.0);
                        for (size_t i = 0; i < stop.distribution.size(); ++i)
                            ev.distribution[i] += prefix_prob * stop.distribution[i];
                        for (size_t o = 0; o < stop.distribution.size(); ++o) {
                            if (stop.distribution[o] <= 0.0) continue;
                            auto next = script;
                            next.push_back(static_cast<int32_t>(o));
                            explore(std::move(next), prefix_prob * stop.distribution[o]);
                        }
                    }
                };
            explore({}, 1.0);
            for (auto& [depth, ev] : trace) result.trace.push_back(std::move(ev));
            if (result.branches.size() == 1 && result.branches[0].outcomes.empty())
                result.mode = ExecutionResult::Mode::Classical;
            return result;
        }

        case ExecutionResult::Mode::Forced: {
            Runner runner(program, diags);
            runner.policy = Runner::Policy::ScriptStrict;
            runner.script = &options.forced_outcomes;
            result.branches.push_back(runner.run());
            return result;
        }

        case ExecutionResult::Mode::Sampled: {
            if (options.shots == 0) {
                diags.error("E060", "sampled mode requires at least one shot");
                return std::nullopt;
            }
            result.shots = options.shots;
            result.seed = options.seed;
            Xorshift64Star rng(options.seed);
            for (uint64_t shot = 0; shot < options.shots; ++shot) {
                Runner runner(program, diags);
                runner.policy = Runner::Policy::Sample;
                runner.rng = &rng;
                Branch b = runner.run();
                result.sample_counts[b.outcomes] += 1;
            }
            return result;
        }
        }
        return std::nullopt;
    } catch (const QasmRuntimeError&) {
        return std::nullopt;
    }
}

} // namespace cliq
