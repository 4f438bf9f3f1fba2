#pragma once

#include "cliq/qasm_ast.hpp"

#include <string>

namespace cliq {

/// Deterministic canonical rendering: LF line endings, two-space
/// indentation, one statement per line, fully parenthesized compound
/// expressions. parse_qasm(emit_qasm(p)) reproduces p structurally.
std::string emit_qasm(const QasmProgram& program);

/// Expression rendering used by the emitter and by diagnostics.
std::string emit_qasm_expr(const QasmExpr& expr);

} // namespace cliq
