#pragma once

#include "cliq/diagnostics.hpp"
#include "cliq/source.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cliq {

enum class Tok : uint8_t {
    EndOfFile,
    Newline,
    Indent,
    Dedent,
    Ident,
    IntLit,
    FloatLit,
    // keywords
    KwDef,
    KwIf,
    KwElif,
    KwElse,
    KwWhile,
    KwFor,
    KwIn,
    KwBreak,
    KwContinue,
    KwReturn,
    KwPass,
    KwAnd,
    KwOr,
    KwNot,
    KwTrue,
    KwFalse,
    KwUnsupported, // class, lambda, import, ... (E002 at the use site)
    // punctuation and operators
    Plus,
    Minus,
    Star,
    DoubleStar,
    Slash,
    DoubleSlash,
    Percent,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semicolon,
    Arrow,
    Assign,
    PlusEq,
    MinusEq,
    StarEq,
    SlashEq,
    DoubleSlashEq,
    PercentEq,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
};

struct Token {
    Tok kind = Tok::EndOfFile;
    Span span;
    std::string text;      // Ident and KwUnsupported
    int32_t int_val = 0;   // IntLit (wrapped to 32 bits)
    double float_val = 0;  // FloatLit
};

/// `# qplp: <id>` comment hint. Recorded with the offset of the first
/// source byte after the directive's line so the optimizer can associate
/// it with the following statement.
struct QplpDirective {
    std::string entry_id;
    Span span;
    uint32_t applies_at = 0;
};

struct LexResult {
    std::vector<Token> tokens; // ends with EndOfFile
    std::vector<QplpDirective> directives;
};

/// Tokenizes a module. Indentation is significant; INDENT/DEDENT tokens
/// frame nested blocks. Tabs anywhere outside comments are E003. Newlines
/// inside (...) or [...] are ignored.
std::optional<LexResult> lex_module(const SourceModule& src, Diagnostics& diags);

} // namespace cliq
