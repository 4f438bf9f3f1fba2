#pragma once

#include "cliq/diagnostics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cliq {

/// One rewrite rule: (node kind, operand-type signature) -> OpenQASM text
/// template. Templates use positional placeholders {0},{1},... for
/// operand renderings and named placeholders ({target}, {value}, {name},
/// {index}, {size}, {init}, {body}, {orelse}) for statement parts.
struct MappingRule {
    std::string kind;
    std::vector<std::string> sig; // empty when wildcard
    bool wildcard_sig = false;    // signature field was "-"
    std::string result_type;      // "int", "float", "bool", or "-"
    std::string template_text;    // escapes already resolved
    int line = 0;

    std::string key_string() const;
};

class MappingRuleSet {
  public:
    int version = 1;
    std::vector<MappingRule> rules;

    /// Exact-signature match first, wildcard fallback second.
    const MappingRule* lookup(const std::string& kind,
                              const std::vector<std::string>& sig) const;

    /// Reporting variant: emits E023 when nothing applies.
    const MappingRule* lookup(const std::string& kind, const std::vector<std::string>& sig,
                              Diagnostics& diags) const;

    /// Round-trips through load_mapping.
    std::string serialize() const;
};

/// Parses and validates a mapping document. Errors: E020 malformed line,
/// E021 duplicate key, E022 missing coverage for a kind the lowering can
/// consult.
std::optional<MappingRuleSet> load_mapping(const std::string& text, Diagnostics& diags);

/// The (kind, signature) pairs lower_program may look up; load_mapping
/// requires every one of them to resolve.
const std::vector<std::pair<std::string, std::vector<std::string>>>& required_mapping_coverage();

/// The embedded default rule set targeting OpenQASM 3.0.
const std::string& default_mapping_text();

/// Placeholder substitution. Returns std::nullopt and fills *error when a
/// placeholder has no binding.
std::optional<std::string> instantiate_template(const std::string& template_text,
                                                const std::vector<std::string>& positional,
                                                const std::map<std::string, std::string>& named,
                                                std::string* error);

} // namespace cliq
