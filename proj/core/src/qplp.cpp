#include "cliq/qplp.hpp"

#include "cliq/statevector.hpp"

#include <algorithm>

namespace cliq {

namespace {

bool is_power_of_two(int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int64_t n) {
    int k = 0;
    while ((int64_t{1} << k) < n) ++k;
    return k;
}

// X layer flipping the qubits where `index` has a zero bit, so the
// multi-controlled Z afterwards acts on exactly |index>.
void append_mask_x(std::vector<QasmGate>& out, int n, int64_t index, const std::string& reg) {
    for (int j = 0; j < n; ++j) {
        if (((index >> j) & 1) == 0) {
            QasmGate g;
            g.gate = "x";
            g.operands.emplace_back(reg, j);
            out.push_back(std::move(g));
        }
    }
}

void append_mcz(std::vector<QasmGate>& out, int n, const std::string& reg) {
    QasmGate g;
    g.gate = "z";
    g.ctrl_count = n - 1;
    for (int j = 0; j < n; ++j) g.operands.emplace_back(reg, j);
    out.push_back(std::move(g));
}

std::string render_gate_line(const QasmGate& g) {
    std::string out;
    if (g.ctrl_count > 0) out += "ctrl(" + std::to_string(g.ctrl_count) + ") @ ";
    out += g.gate + " ";
    for (size_t i = 0; i < g.operands.size(); ++i) {
        if (i) out += ", ";
        out += g.operands[i].first + "[" + std::to_string(g.operands[i].second) + "]";
    }
    return out + ";";
}

} // namespace

const std::vector<QplpEntry>& qplp_catalog() {
    static const std::vector<QplpEntry> entries = {
        {
            "qplp.search.grover",
            "linear search over a compile-time-constant int array, replaced by "
            "Grover amplitude amplification with a classical fallback check",
            "Grover, STOC 1996: A fast quantum mechanical algorithm for database search",
            true,
        },
        {
            "qplp.mean.estimation",
            "arithmetic-mean computation over numeric data via quantum mean "
            "estimation (metadata only, no executable template)",
            "Hamoudi & Magniez, 2019: Quantum Chebyshev's inequality and applications",
            false,
        },
        {
            "qplp.dlog.ekera",
            "discrete-logarithm computation via Shor-style period finding "
            "(metadata only, no executable template)",
            "Ekeraa, J. Math. Cryptol. 2021: Quantum algorithms for computing general "
            "discrete logarithms and orders with tradeoffs",
            false,
        },
    };
    return entries;
}

const QplpEntry* find_qplp_entry(const std::string& id) {
    for (const auto& e : qplp_catalog()) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

namespace {

// Matches the canonical block shape and collects hole bindings.
MatchOutcome match_search(const TypedProgram& tp, const std::vector<AstPtr>& stmts, size_t at) {
    if (at + 1 >= stmts.size()) return NoMatch{"window too short"};
    const AstNode& init = *stmts[at];
    const AstNode& loop = *stmts[at + 1];

    // found = -1
    if (init.kind != NodeKind::Assign || init.child(0).kind != NodeKind::Name)
        return NoMatch{"block shape mismatch"};
    const Value* init_val = tp.folded_of(init.child(1));
    if (!init_val || !is_int(*init_val) || as_int(*init_val) != -1)
        return NoMatch{"block shape mismatch"};
    const std::string& found = init.child(0).str_attr;

    // for i in range(0, N) with unit step
    if (loop.kind != NodeKind::ForRange) return NoMatch{"block shape mismatch"};
    const Value* start = tp.folded_of(loop.child(0));
    const Value* step = tp.folded_of(loop.child(2));
    if (!start || as_int(*start) != 0 || !step || as_int(*step) != 1)
        return NoMatch{"block shape mismatch"};
    const std::string& loop_var = loop.str_attr;

    // body: exactly one statement, the guarded hit-and-break
    if (loop.children.size() != 4) return NoMatch{"body shape mismatch"};
    const AstNode& guard = loop.child(3);
    if (guard.kind != NodeKind::If || guard.then_count() != 2 || guard.else_count() != 0)
        return NoMatch{"body shape mismatch"};
    const AstNode& cond = guard.child(0);
    const AstNode& hit = guard.child(1);
    const AstNode& brk = guard.child(2);
    if (brk.kind != NodeKind::Break) return NoMatch{"body shape mismatch"};
    if (hit.kind != NodeKind::Assign || hit.child(0).kind != NodeKind::Name ||
        hit.child(0).str_attr != found || hit.child(1).kind != NodeKind::Name ||
        hit.child(1).str_attr != loop_var)
        return NoMatch{"body shape mismatch"};

    // condition: a[i] == target
    if (cond.kind != NodeKind::Compare || cond.str_attr != "==" ||
        cond.child(0).kind != NodeKind::Index)
        return NoMatch{"body shape mismatch"};
    const AstNode& index = cond.child(0);
    if (index.child(1).kind != NodeKind::Name || index.child(1).str_attr != loop_var)
        return NoMatch{"body shape mismatch"};
    const std::string& array = index.child(0).str_attr;
    const AstNode& target = cond.child(1);

    // ---- applicability ----

    auto sym_it = tp.module_symbols.find(array);
    if (sym_it == tp.module_symbols.end() || !sym_it->second.type.is_array())
        return NoMatch{"array not compile-time constant"};
    const SymbolInfo& arr = sym_it->second;
    if (arr.array_mutated) return NoMatch{"array not compile-time constant"};

    const Value* stop = tp.folded_of(loop.child(1));
    if (!stop || !is_int(*stop)) return NoMatch{"range bound not a compile-time constant"};
    int64_t n_elems = as_int(*stop);
    if (n_elems != arr.type.size) return NoMatch{"range bound does not equal the array size"};

    const Value* target_val = tp.folded_of(target);
    if (!target_val || !is_int(*target_val)) return NoMatch{"target not compile-time constant"};

    if (!is_power_of_two(n_elems)) return NoMatch{"N not a power of two"};
    int qubits = log2_exact(n_elems);
    if (qubits > StateVector::kMaxQubits)
        return NoMatch{"array exceeds the simulator qubit limit"};

    std::vector<int32_t> marked;
    for (int32_t i = 0; i < arr.type.size; ++i) {
        if (arr.array_init[static_cast<size_t>(i)] == as_int(*target_val)) marked.push_back(i);
    }
    if (marked.empty()) return NoMatch{"no marked elements (classical result is always -1)"};

    SearchMatch match;
    match.info.params.qubit_count = qubits;
    match.info.params.marked = std::move(marked);
    match.info.params.iterations =
        grover_iterations(n_elems, static_cast<int64_t>(match.info.params.marked.size()));
    match.info.array_name = array;
    match.info.found_name = found;
    match.info.array_values = arr.array_init;
    match.info.target_value = as_int(*target_val);
    match.span = {init.span.begin, loop.span.end};
    match.init_stmt = &init;
    match.loop_stmt = &loop;
    match.loop_var = loop_var;
    return match;
}

} // namespace

MatchOutcome match_block(const TypedProgram& tp, const QplpEntry& entry,
                         const std::vector<AstPtr>& stmts, size_t at) {
    if (!entry.executable) return NoMatch{"entry '" + entry.id + "' has no executable template"};
    if (entry.id == "qplp.search.grover") return match_search(tp, stmts, at);
    return NoMatch{"entry '" + entry.id + "' has no matcher"};
}

std::vector<QasmGate> grover_oracle_gates(const GroverParams& params, const std::string& reg) {
    std::vector<QasmGate> out;
    for (int32_t m : params.marked) {
        if (params.qubit_count == 1) {
            // Phase flip on a single qubit: z, X-conjugated for |0>.
            append_mask_x(out, 1, m, reg);
            QasmGate g;
            g.gate = "z";
            g.operands.emplace_back(reg, 0);
            out.push_back(std::move(g));
            append_mask_x(out, 1, m, reg);
            continue;
        }
        append_mask_x(out, params.qubit_count, m, reg);
        append_mcz(out, params.qubit_count, reg);
        append_mask_x(out, params.qubit_count, m, reg);
    }
    return out;
}

std::vector<QasmGate> grover_diffusion_gates(int qubit_count, const std::string& reg) {
    std::vector<QasmGate> out;
    auto layer = [&](const char* gate) {
        for (int j = 0; j < qubit_count; ++j) {
            QasmGate g;
            g.gate = gate;
            g.operands.emplace_back(reg, j);
            out.push_back(std::move(g));
        }
    };
    layer("h");
    layer("x");
    if (qubit_count == 1) {
        QasmGate g;
        g.gate = "z";
        g.operands.emplace_back(reg, 0);
        out.push_back(std::move(g));
    } else {
        append_mcz(out, qubit_count, reg);
    }
    layer("x");
    layer("h");
    return out;
}

std::string grover_qubit_reg(int site_index) { return "__q" + std::to_string(site_index); }
std::string grover_bit_reg(int site_index) { return "__m" + std::to_string(site_index); }

std::optional<GroverFragment> instantiate_grover(const QuantumBlockInfo& info, int site_index,
                                                 Diagnostics& diags) {
    const GroverParams& p = info.params;
    if (p.qubit_count < 1 || p.qubit_count > StateVector::kMaxQubits) {
        diags.error("E041", "register of " + std::to_string(p.qubit_count) +
                                " qubits exceeds the simulator limit of " +
                                std::to_string(StateVector::kMaxQubits));
        return std::nullopt;
    }

    GroverFragment frag;
    const std::string q = grover_qubit_reg(site_index);
    const std::string m = grover_bit_reg(site_index);
    frag.decl_lines.push_back("qubit[" + std::to_string(p.qubit_count) + "] " + q + ";");
    frag.decl_lines.push_back("bit[" + std::to_string(p.qubit_count) + "] " + m + ";");

    // reset supports re-entry when the block sits inside a loop
    frag.stmt_lines.push_back("reset " + q + ";");
    for (int j = 0; j < p.qubit_count; ++j) {
        frag.stmt_lines.push_back("h " + q + "[" + std::to_string(j) + "];");
    }
    for (int it = 0; it < p.iterations; ++it) {
        for (const auto& g : grover_oracle_gates(p, q)) frag.stmt_lines.push_back(render_gate_line(g));
        for (const auto& g : grover_diffusion_gates(p.qubit_count, q))
            frag.stmt_lines.push_back(render_gate_line(g));
    }
    frag.stmt_lines.push_back(m + " = measure " + q + ";");
    frag.stmt_lines.push_back(info.found_name + " = int[32](" + m + ");");
    frag.stmt_lines.push_back("if ((" + info.array_name + "[" + info.found_name + "] != " +
                              std::to_string(info.target_value) + ")) {");
    frag.stmt_lines.push_back("  " + info.found_name + " = -1;");
    frag.stmt_lines.push_back("}");
    return frag;
}

} // namespace cliq
