#pragma once

#include "cliq/checker.hpp"
#include "cliq/parser.hpp"
#include "cliq/source.hpp"

#include <gtest/gtest.h>

#include <optional>
#include <string>

namespace cliq::test {

inline SourceModule make_source(const std::string& text, const std::string& path = "test.cliq") {
    Diagnostics diags;
    auto src = SourceModule::from_text(path, text, diags);
    if (!src) throw std::runtime_error("test source failed UTF-8 validation");
    return *src;
}

struct Frontend {
    SourceModule src;
    std::optional<ParseResult> parsed;
    std::optional<TypedProgram> typed;
    Diagnostics diags;
};

/// Parses and checks, collecting diagnostics instead of asserting.
inline Frontend frontend(const std::string& text) {
    Frontend out{make_source(text), std::nullopt, std::nullopt, {}};
    out.parsed = parse_module(out.src, out.diags);
    if (!out.parsed) return out;
    auto root = out.parsed->root->clone(); // keep the parse tree available
    out.typed = check_program(std::move(root), out.diags);
    return out;
}

/// Parses and checks a program the test requires to be valid.
inline TypedProgram typecheck(const std::string& text) {
    Frontend f = frontend(text);
    if (!f.typed) {
        ADD_FAILURE() << "program failed the frontend: " << f.diags.first_error();
        throw std::runtime_error("typecheck failed");
    }
    return std::move(*f.typed);
}

inline std::string first_code(const Diagnostics& diags) { return diags.first_code(); }

} // namespace cliq::test
