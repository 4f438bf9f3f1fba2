#pragma once

#include "cliq/diagnostics.hpp"
#include "cliq/qasm_ast.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cliq {

/// Parses a complete program of the documented OpenQASM 3.0 subset and
/// validates it (declaration before use, typing, gate-shape rules).
/// Errors: E061 syntax error / undeclared identifier, E062 outside the
/// supported subset, E063 qubit budget exceeded.
std::optional<QasmProgram> parse_qasm(const std::string& text, Diagnostics& diags);

/// Syntax-only entry points used by the lowering to parse instantiated
/// template text. No identifier or type validation happens here.
std::optional<std::vector<QasmStmtPtr>> parse_qasm_statements(const std::string& text,
                                                              Diagnostics& diags);
std::optional<QasmDecl> parse_qasm_declaration(const std::string& text, Diagnostics& diags);

/// Full semantic validation of an assembled program.
bool validate_qasm(const QasmProgram& program, Diagnostics& diags);

} // namespace cliq
