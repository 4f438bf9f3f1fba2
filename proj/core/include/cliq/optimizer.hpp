#pragma once

#include "cliq/checker.hpp"
#include "cliq/lexer.hpp"
#include "cliq/qplp.hpp"
#include "cliq/source.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cliq {

enum class OptimizeMode : uint8_t { ReportOnly, ApplyAll, ApplySelected };

struct OptimizationSite {
    std::string entry_id;
    Span span;                  // init statement begin .. loop end
    std::vector<size_t> path;   // child indices from the module root to the init statement
    QuantumBlockInfo info;
    std::string loop_var;
    double predicted_success = 0.0;
    bool applied = false;
};

struct OptimizationReport {
    OptimizeMode mode = OptimizeMode::ReportOnly;
    std::vector<std::string> selected_ids;
    std::vector<OptimizationSite> sites;

    size_t applied_count() const {
        size_t n = 0;
        for (const auto& s : sites) n += s.applied ? 1 : 0;
        return n;
    }
};

/// Deterministic left-to-right, outermost-first scan for catalog matches.
/// Inner blocks of a matched window are not rescanned, so site spans are
/// disjoint. A `# qplp: <id>` directive restricts the entry tried at the
/// statement that follows it.
OptimizationReport find_sites(const TypedProgram& tp,
                              const std::vector<QplpDirective>& directives = {});

/// Marks the applied flags according to the mode. ApplySelected keeps
/// only sites whose entry id is listed.
void select_sites(OptimizationReport& report, OptimizeMode mode,
                  const std::vector<std::string>& ids = {});

/// Rewrites every applied site into a QuantumBlock statement and
/// re-checks the program. The report must come from this TypedProgram;
/// a stale report is E050.
std::optional<TypedProgram> apply_report(const TypedProgram& tp, const OptimizationReport& report,
                                         Diagnostics& diags);

/// Deterministic JSON serialization (documented in docs/verification.md).
/// Line/column fields are included when the source module is given.
std::string report_to_json(const OptimizationReport& report, const SourceModule* src = nullptr);

} // namespace cliq
