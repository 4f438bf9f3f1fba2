#include "cliq/verifier.hpp"

#include "cliq/checker.hpp"
#include "cliq/interpreter.hpp"
#include "cliq/lowering.hpp"
#include "cliq/optimizer.hpp"
#include "cliq/parser.hpp"
#include "cliq/qasm_emitter.hpp"
#include "cliq/qasm_interpreter.hpp"
#include "cliq/qasm_parser.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include <json.hpp>

namespace cliq {

bool outputs_match(const Value& reference, const Value& candidate) {
    if (reference.index() != candidate.index()) return false;
    if (is_int(reference)) return as_int(reference) == as_int(candidate);
    if (is_bool(reference)) return as_bool(reference) == as_bool(candidate);
    double a = as_float(reference), b = as_float(candidate);
    if (a == b) return true;
    return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

namespace {

constexpr double kProbabilityTolerance = 1e-9;

Verdict fail_verdict(std::string detail, bool optimized) {
    Verdict v;
    v.pass = false;
    v.optimized = optimized;
    v.detail = std::move(detail);
    return v;
}

bool compare_output_vectors(const std::vector<Value>& ref, const std::vector<Value>& got,
                            Verdict& verdict, const std::string& context) {
    if (ref.size() != got.size()) {
        verdict.detail = context + ": output count mismatch (" + std::to_string(ref.size()) +
                         " vs " + std::to_string(got.size()) + ")";
        return false;
    }
    for (size_t i = 0; i < ref.size(); ++i) {
        if (!outputs_match(ref[i], got[i])) {
            verdict.first_divergence = i;
            verdict.detail = context + ": output " + std::to_string(i) + " diverges: expected " +
                             value_to_string(ref[i]) + ", got " + value_to_string(got[i]);
            return false;
        }
    }
    return true;
}

// Resolves a site path back to the statement pointers inside tp.
struct SiteStatements {
    const AstNode* init = nullptr;
    const AstNode* loop = nullptr;
};

std::optional<SiteStatements> resolve_site(const TypedProgram& tp, const OptimizationSite& site) {
    const AstNode* parent = tp.root.get();
    for (size_t d = 0; d + 1 < site.path.size(); ++d) {
        size_t idx = site.path[d];
        if (idx >= parent->children.size()) return std::nullopt;
        parent = parent->children[idx].get();
    }
    size_t at = site.path.back();
    if (at + 1 >= parent->children.size()) return std::nullopt;
    return SiteStatements{parent->children[at].get(), parent->children[at + 1].get()};
}

} // namespace

Verdict differential_check(const SourceModule& src, bool optimize, const MappingRuleSet& rules,
                           Diagnostics& diags) {
    auto parsed = parse_module(src, diags);
    if (!parsed) return fail_verdict("frontend: " + diags.first_error(), optimize);
    auto tp = check_program(std::move(parsed->root), diags);
    if (!tp) return fail_verdict("frontend: " + diags.first_error(), optimize);

    Verdict verdict;
    verdict.optimized = optimize;

    // Reference semantics of the source program.
    Diagnostics ref_diags;
    auto ref = reference_eval(*tp, ref_diags);
    std::string ref_error = ref ? "" : ref_diags.first_code();
    if (ref) verdict.reference_outputs = ref->outputs();

    // Translation (optionally with every executable site applied).
    OptimizationReport report = find_sites(*tp, parsed->directives);
    select_sites(report, optimize ? OptimizeMode::ApplyAll : OptimizeMode::ReportOnly);
    verdict.site_count = optimize ? report.applied_count() : 0;

    const TypedProgram* lower_input = &*tp;
    std::optional<TypedProgram> rewritten;
    if (optimize && report.applied_count() > 0) {
        rewritten = apply_report(*tp, report, diags);
        if (!rewritten) return fail_verdict("optimizer: " + diags.first_error(), optimize);
        lower_input = &*rewritten;
    }

    auto qasm = lower_program(*lower_input, rules, diags);
    if (!qasm) return fail_verdict("backend: " + diags.first_error(), optimize);

    // Round-trip through text, exactly like the CLI artifact.
    std::string text = emit_qasm(*qasm);
    Diagnostics reparse_diags;
    auto reparsed = parse_qasm(text, reparse_diags);
    if (!reparsed)
        return fail_verdict("emitted text does not re-parse: " + reparse_diags.first_error(),
                            optimize);

    QasmExecutionOptions exec_options;
    exec_options.mode = ExecutionResult::Mode::Exact;
    Diagnostics qasm_diags;
    auto qres = interpret_qasm(*reparsed, exec_options, qasm_diags);

    // A runtime error is preserved behavior when both sides report the
    // same error code.
    if (!ref || !qres) {
        std::string qasm_error = qres ? "" : qasm_diags.first_code();
        if (!ref && !qres && ref_error == qasm_error && !ref_error.empty()) {
            verdict.pass = true;
            verdict.detail = "both sides fail with " + ref_error + " (" +
                             ref_diags.first_error() + ")";
            return verdict;
        }
        if (!ref)
            return fail_verdict("reference execution failed: " + ref_diags.first_error(),
                                optimize);
        return fail_verdict("qasm execution failed: " + qasm_diags.first_error(), optimize);
    }

    verdict.branch_count = qres->branches.size();

    if (!optimize || report.applied_count() == 0) {
        if (qres->branches.size() != 1)
            return fail_verdict("classical program produced measurement branches", optimize);
        if (!compare_output_vectors(verdict.reference_outputs, qres->branches[0].outputs, verdict,
                                    "classical path"))
            return verdict;
        verdict.pass = true;
        return verdict;
    }

    // ---- optimized path ----

    // Map measurement events (by register name) back to applied sites.
    std::vector<const OptimizationSite*> applied;
    std::vector<SiteStatements> applied_stmts;
    for (const auto& s : report.sites) {
        if (!s.applied) continue;
        auto stmts = resolve_site(*tp, s);
        if (!stmts) return fail_verdict("internal: cannot resolve site statements", optimize);
        applied.push_back(&s);
        applied_stmts.push_back(*stmts);
    }

    auto site_for_event = [&](const std::string& reg) -> int {
        for (size_t i = 0; i < applied.size(); ++i) {
            if (grover_qubit_reg(static_cast<int>(i)) == reg) return static_cast<int>(i);
        }
        return -1;
    };

    // Per-event success probability must match the analytic model.
    for (size_t e = 0; e < qres->trace.size(); ++e) {
        int site_idx = site_for_event(qres->trace[e].register_name);
        if (site_idx < 0)
            return fail_verdict("internal: measurement on unknown register " +
                                    qres->trace[e].register_name,
                                optimize);
        const OptimizationSite& site = *applied[static_cast<size_t>(site_idx)];
        double marked_mass = 0.0;
        for (int32_t m : site.info.params.marked) {
            if (static_cast<size_t>(m) < qres->trace[e].distribution.size())
                marked_mass += qres->trace[e].distribution[static_cast<size_t>(m)];
        }
        if (e == 0) {
            verdict.success_probability = marked_mass;
            verdict.model_probability = site.predicted_success;
        }
        if (std::fabs(marked_mass - site.predicted_success) > kProbabilityTolerance) {
            return fail_verdict(
                "measurement event " + std::to_string(e) + ": success probability " +
                    format_double(marked_mass) + " differs from the model " +
                    format_double(site.predicted_success),
                optimize);
        }
    }

    // Replay every branch through the classical semantics with the search
    // results forced to the verified measurement outcomes.
    for (const Branch& branch : qres->branches) {
        std::vector<SearchOverride> overrides(applied.size());
        for (size_t i = 0; i < applied.size(); ++i) {
            overrides[i].init_stmt = applied_stmts[i].init;
            overrides[i].loop_stmt = applied_stmts[i].loop;
            overrides[i].found_name = applied[i]->info.found_name;
        }

        // Walk the branch outcomes in event order.
        for (size_t e = 0; e < branch.outcomes.size(); ++e) {
            int site_idx = site_for_event(branch.outcome_registers[e]);
            if (site_idx < 0)
                return fail_verdict("internal: unknown measurement register", optimize);
            const OptimizationSite& site = *applied[static_cast<size_t>(site_idx)];
            int32_t outcome = branch.outcomes[e];
            const auto& values = site.info.array_values;
            bool hit = outcome >= 0 && static_cast<size_t>(outcome) < values.size() &&
                       values[static_cast<size_t>(outcome)] == site.info.target_value;
            overrides[static_cast<size_t>(site_idx)].values.push_back(hit ? outcome : -1);

            // Fallback soundness: found must be a marked index or -1.
            auto& scalars = branch.final_scalars;
            auto found_it = scalars.find(site.info.found_name);
            if (found_it == scalars.end() || !is_int(found_it->second))
                return fail_verdict("internal: '" + site.info.found_name +
                                        "' missing from the translated program",
                                    optimize);
        }

        Diagnostics replay_diags;
        auto replay = reference_eval(*tp, replay_diags, overrides);
        if (!replay)
            return fail_verdict("reference replay failed: " + replay_diags.first_error(),
                                optimize);
        if (!compare_output_vectors(replay->outputs(), branch.outputs, verdict,
                                    "branch " + std::to_string(&branch - &qres->branches[0])))
            return verdict;

        // The forced value is also the final value the translated block
        // must leave in `found` when the branch has a single event per
        // site (the general case is covered by the output comparison).
        for (size_t i = 0; i < applied.size(); ++i) {
            if (overrides[i].values.size() != 1) continue;
            auto it = branch.final_scalars.find(applied[i]->info.found_name);
            auto rt = replay->branches[0].final_scalars.find(applied[i]->info.found_name);
            if (it != branch.final_scalars.end() && rt != replay->branches[0].final_scalars.end() &&
                !outputs_match(rt->second, it->second)) {
                return fail_verdict("'" + applied[i]->info.found_name +
                                        "' diverges between the translated program and the "
                                        "forced classical replay",
                                    optimize);
            }
        }
    }

    verdict.pass = true;
    return verdict;
}

std::string Verdict::to_json() const {
    nlohmann::ordered_json doc;
    doc["verdict"] = pass ? "PASS" : "FAIL";
    doc["mode"] = optimized ? "optimized" : "classical";
    if (!detail.empty()) doc["detail"] = detail;
    auto outputs = nlohmann::ordered_json::array();
    for (const auto& v : reference_outputs) {
        if (is_int(v)) outputs.push_back(as_int(v));
        else if (is_bool(v)) outputs.push_back(as_bool(v));
        else outputs.push_back(as_float(v));
    }
    doc["reference_outputs"] = std::move(outputs);
    if (first_divergence) doc["first_divergence"] = *first_divergence;
    doc["branches"] = branch_count;
    doc["sites"] = site_count;
    if (success_probability >= 0.0) {
        doc["success_probability"] = success_probability;
        doc["model_probability"] = model_probability;
    }
    return doc.dump(2) + "\n";
}

} // namespace cliq
