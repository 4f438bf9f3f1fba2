#pragma once

#include "cliq/diagnostics.hpp"
#include "cliq/mapping.hpp"
#include "cliq/optimizer.hpp"
#include "cliq/qasm_ast.hpp"
#include "cliq/source.hpp"

#include <optional>
#include <string>

namespace cliq {

struct TranslateOptions {
    OptimizeMode mode = OptimizeMode::ReportOnly;
    std::vector<std::string> selected_ids;
    const MappingRuleSet* rules = nullptr; // null = embedded default mapping
};

struct Translation {
    QasmProgram program;
    std::string qasm_text; // canonical emission of `program`
    OptimizationReport report;
};

/// parse -> check -> find sites -> (apply) -> lower -> emit.
std::optional<Translation> translate_source(const SourceModule& src,
                                            const TranslateOptions& options, Diagnostics& diags);

/// The embedded default mapping, loaded once.
const MappingRuleSet& default_mapping();

} // namespace cliq
