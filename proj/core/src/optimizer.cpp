#include "cliq/optimizer.hpp"

#include <algorithm>

#include <json.hpp>

namespace cliq {

namespace {

struct Scanner {
    const TypedProgram& tp;
    const std::vector<QplpDirective>& directives;
    std::vector<OptimizationSite> sites;

    // Directive lookup: the hint applies to the first statement at or
    // after its source position.
    const QplpDirective* directive_for(const AstNode& stmt) const {
        const QplpDirective* best = nullptr;
        for (const auto& d : directives) {
            if (d.applies_at <= stmt.span.begin) {
                if (!best || d.applies_at > best->applies_at) best = &d;
            }
        }
        return best;
    }

    void scan_list(const std::vector<AstPtr>& stmts, size_t begin, size_t end,
                   std::vector<size_t> path_prefix) {
        size_t i = begin;
        while (i < end) {
            bool matched = false;
            if (i + 1 < end) {
                matched = try_match(stmts, i, path_prefix);
            }
            if (matched) {
                i += 2; // the window is consumed; inner blocks are not rescanned
                continue;
            }
            scan_children(*stmts[i], path_prefix, i);
            ++i;
        }
    }

    bool try_match(const std::vector<AstPtr>& stmts, size_t at, const std::vector<size_t>& path) {
        const QplpDirective* hint = directive_for(*stmts[at]);
        for (const auto& entry : qplp_catalog()) {
            if (!entry.executable) continue;
            if (hint && hint->entry_id != entry.id) continue;
            MatchOutcome outcome = match_block(tp, entry, stmts, at);
            if (const SearchMatch* m = std::get_if<SearchMatch>(&outcome)) {
                OptimizationSite site;
                site.entry_id = entry.id;
                site.span = m->span;
                site.path = path;
                site.path.push_back(at);
                site.info = m->info;
                site.loop_var = m->loop_var;
                site.predicted_success = grover_success_probability(
                    m->info.params.search_space(),
                    static_cast<int64_t>(m->info.params.marked.size()),
                    m->info.params.iterations);
                sites.push_back(std::move(site));
                return true;
            }
        }
        return false;
    }

    void scan_children(const AstNode& stmt, std::vector<size_t> path, size_t index) {
        path.push_back(index);
        switch (stmt.kind) {
        case NodeKind::If: {
            // children = [cond, then..., else...]
            scan_list(stmt.children, 1, 1 + stmt.then_count(), path);
            scan_list(stmt.children, 1 + stmt.then_count(), stmt.children.size(), path);
            return;
        }
        case NodeKind::While: {
            scan_list(stmt.children, 1, stmt.children.size(), path);
            return;
        }
        case NodeKind::ForRange: {
            scan_list(stmt.children, 3, stmt.children.size(), path);
            return;
        }
        default: return; // FuncDef bodies are not scanned: registers are global
        }
    }
};

} // namespace

OptimizationReport find_sites(const TypedProgram& tp,
                              const std::vector<QplpDirective>& directives) {
    Scanner scanner{tp, directives, {}};
    scanner.scan_list(tp.root->children, 0, tp.root->children.size(), {});
    OptimizationReport report;
    report.sites = std::move(scanner.sites);
    std::sort(report.sites.begin(), report.sites.end(),
              [](const OptimizationSite& a, const OptimizationSite& b) {
                  return a.span.begin < b.span.begin;
              });
    return report;
}

void select_sites(OptimizationReport& report, OptimizeMode mode,
                  const std::vector<std::string>& ids) {
    report.mode = mode;
    report.selected_ids = ids;
    for (auto& site : report.sites) {
        switch (mode) {
        case OptimizeMode::ReportOnly: site.applied = false; break;
        case OptimizeMode::ApplyAll: site.applied = true; break;
        case OptimizeMode::ApplySelected:
            site.applied =
                std::find(ids.begin(), ids.end(), site.entry_id) != ids.end();
            break;
        }
    }
}

std::optional<TypedProgram> apply_report(const TypedProgram& tp, const OptimizationReport& report,
                                         Diagnostics& diags) {
    AstPtr root = tp.root->clone();

    // Apply right-to-left so earlier paths stay valid while later windows
    // collapse into single QuantumBlock nodes.
    std::vector<const OptimizationSite*> applied;
    for (const auto& s : report.sites) {
        if (s.applied) applied.push_back(&s);
    }
    std::sort(applied.begin(), applied.end(), [](const OptimizationSite* a,
                                                 const OptimizationSite* b) {
        return a->span.begin > b->span.begin;
    });

    for (const OptimizationSite* site : applied) {
        AstNode* parent = root.get();
        for (size_t d = 0; d + 1 < site->path.size(); ++d) {
            size_t idx = site->path[d];
            if (idx >= parent->children.size()) {
                diags.error("E050", "optimization site no longer valid (stale report)",
                            site->span);
                return std::nullopt;
            }
            parent = parent->children[idx].get();
        }
        size_t at = site->path.back();
        if (at + 1 >= parent->children.size() ||
            parent->children[at]->kind != NodeKind::Assign ||
            parent->children[at + 1]->kind != NodeKind::ForRange ||
            parent->children[at]->span.begin != site->span.begin ||
            parent->children[at + 1]->span.end != site->span.end) {
            diags.error("E050", "optimization site no longer valid (stale report)", site->span);
            return std::nullopt;
        }
        auto block = make_node(NodeKind::QuantumBlock, site->span);
        block->quantum = std::make_unique<QuantumBlockInfo>(site->info);
        parent->children.erase(parent->children.begin() + static_cast<ptrdiff_t>(at),
                               parent->children.begin() + static_cast<ptrdiff_t>(at + 2));
        parent->children.insert(parent->children.begin() + static_cast<ptrdiff_t>(at),
                                std::move(block));
        // If statements keep the then/else split in int_attr.
        if (parent->kind == NodeKind::If && at < 1 + parent->then_count()) {
            parent->int_attr -= 1;
        }
    }

    return check_program(std::move(root), diags);
}

std::string report_to_json(const OptimizationReport& report, const SourceModule* src) {
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    switch (report.mode) {
    case OptimizeMode::ReportOnly: doc["mode"] = "report-only"; break;
    case OptimizeMode::ApplyAll: doc["mode"] = "apply-all"; break;
    case OptimizeMode::ApplySelected: doc["mode"] = "apply-selected"; break;
    }
    if (report.mode == OptimizeMode::ApplySelected) doc["selected"] = report.selected_ids;
    doc["sites"] = nlohmann::ordered_json::array();
    for (const auto& s : report.sites) {
        nlohmann::ordered_json site;
        site["entry"] = s.entry_id;
        site["span"] = {s.span.begin, s.span.end};
        if (src) {
            auto from = src->line_col(s.span.begin);
            auto to = src->line_col(s.span.end);
            site["first_line"] = from.line;
            site["last_line"] = to.line;
        }
        site["bindings"] = {
            {"array", s.info.array_name},
            {"found", s.info.found_name},
            {"loop_var", s.loop_var},
            {"target", s.info.target_value},
            {"n", s.info.params.search_space()},
        };
        site["qubits"] = s.info.params.qubit_count;
        site["marked"] = s.info.params.marked;
        site["iterations"] = s.info.params.iterations;
        site["predicted_success_probability"] = s.predicted_success;
        site["applied"] = s.applied;
        doc["sites"].push_back(std::move(site));
    }
    return doc.dump(2) + "\n";
}

} // namespace cliq
