#pragma once

#include "cliq/ast.hpp"
#include "cliq/lexer.hpp"
#include "cliq/source.hpp"

#include <optional>

namespace cliq {

struct ParseResult {
    AstPtr root; // Module
    std::vector<QplpDirective> directives;
};

/// Parses one module. Deterministic: the same bytes always produce a
/// structurally identical tree. Reports E001 for syntax errors, E002 for
/// recognized-but-unsupported constructs (classes, lambdas, imports, ...),
/// E003 for tab indentation.
std::optional<ParseResult> parse_module(const SourceModule& src, Diagnostics& diags);

/// Parses a single expression (used by the span-soundness property test).
AstPtr parse_expression_text(const std::string& text, Diagnostics& diags);

} // namespace cliq
