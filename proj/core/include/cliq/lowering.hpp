#pragma once

#include "cliq/checker.hpp"
#include "cliq/diagnostics.hpp"
#include "cliq/mapping.hpp"
#include "cliq/qasm_ast.hpp"

#include <optional>

namespace cliq {

/// Structure-preserving lowering driven by the mapping rules: each source
/// statement is instantiated into OpenQASM text (declarations hoisted to
/// the program head in first-use order), the assembled document is parsed
/// back, and the validated program is returned. Untranslatable constructs
/// are E030; E023 surfaces when a custom rule set misses a lookup that
/// coverage validation could not anticipate.
std::optional<QasmProgram> lower_program(const TypedProgram& tp, const MappingRuleSet& rules,
                                         Diagnostics& diags);

} // namespace cliq
