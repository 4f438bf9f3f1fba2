#include "cliq/lexer.hpp"

#include "cliq/value.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace cliq {

namespace {

const std::unordered_map<std::string_view, Tok>& keyword_table() {
    static const std::unordered_map<std::string_view, Tok> table = {
        {"def", Tok::KwDef},         {"if", Tok::KwIf},
        {"elif", Tok::KwElif},       {"else", Tok::KwElse},
        {"while", Tok::KwWhile},     {"for", Tok::KwFor},
        {"in", Tok::KwIn},           {"break", Tok::KwBreak},
        {"continue", Tok::KwContinue}, {"return", Tok::KwReturn},
        {"pass", Tok::KwPass},       {"and", Tok::KwAnd},
        {"or", Tok::KwOr},           {"not", Tok::KwNot},
        {"True", Tok::KwTrue},       {"False", Tok::KwFalse},
    };
    return table;
}

// Python keywords that name constructs outside the supported subset.
// Lexed as KwUnsupported so the parser can point at them with E002.
const std::unordered_map<std::string_view, bool>& unsupported_table() {
    static const std::unordered_map<std::string_view, bool> table = {
        {"class", true},  {"lambda", true}, {"import", true},   {"from", true},
        {"global", true}, {"nonlocal", true}, {"try", true},    {"except", true},
        {"finally", true}, {"raise", true}, {"with", true},     {"yield", true},
        {"del", true},    {"assert", true}, {"async", true},    {"await", true},
        {"match", true},  {"case", true},  {"None", true},      {"is", true},
    };
    return table;
}

struct Lexer {
    const SourceModule& src;
    Diagnostics& diags;
    LexResult out;
    uint32_t pos = 0;
    int bracket_depth = 0;
    std::vector<uint32_t> indents{0};
    bool at_line_start = true;
    bool line_has_tokens = false;
    bool failed = false;

    Lexer(const SourceModule& s, Diagnostics& d) : src(s), diags(d) {}

    char peek(uint32_t ahead = 0) const {
        uint32_t i = pos + ahead;
        return i < src.text.size() ? src.text[i] : '\0';
    }
    bool at_end() const { return pos >= src.text.size(); }

    void push(Tok kind, uint32_t begin, uint32_t end) {
        Token t;
        t.kind = kind;
        t.span = {begin, end};
        out.tokens.push_back(std::move(t));
    }

    void error(std::string code, std::string msg, uint32_t begin, uint32_t end) {
        diags.error(std::move(code), std::move(msg), {begin, end});
        failed = true;
    }

    void run() {
        while (!failed && !at_end()) {
            if (at_line_start && bracket_depth == 0) {
                if (!handle_indentation()) continue; // blank/comment line consumed
            }
            if (failed || at_end()) break;
            lex_token();
        }
        if (failed) return;
        // Close the final logical line and any open blocks.
        if (line_has_tokens) push(Tok::Newline, pos, pos);
        while (indents.size() > 1) {
            indents.pop_back();
            push(Tok::Dedent, pos, pos);
        }
        push(Tok::EndOfFile, pos, pos);
    }

    // Measures leading whitespace; emits INDENT/DEDENT. Returns false if the
    // line was blank or comment-only (already consumed).
    bool handle_indentation() {
        uint32_t start = pos;
        uint32_t width = 0;
        while (peek() == ' ' || peek() == '\t') {
            if (peek() == '\t') {
                error("E003", "tab characters are not allowed; use spaces", pos, pos + 1);
                return false;
            }
            ++width;
            ++pos;
        }
        if (at_end()) return false;
        if (peek() == '\n') { // blank line
            ++pos;
            return false;
        }
        if (peek() == '#') {
            consume_comment();
            if (peek() == '\n') ++pos;
            return false;
        }
        at_line_start = false;
        line_has_tokens = false;
        if (width > indents.back()) {
            indents.push_back(width);
            push(Tok::Indent, start, pos);
        } else if (width < indents.back()) {
            while (indents.size() > 1 && width < indents.back()) {
                indents.pop_back();
                push(Tok::Dedent, start, pos);
            }
            if (width != indents.back()) {
                error("E001", "unindent does not match any outer indentation level", start, pos);
                return false;
            }
        }
        return true;
    }

    void consume_comment() {
        uint32_t begin = pos;
        while (!at_end() && peek() != '\n') ++pos;
        std::string_view body = src.slice({begin, pos});
        // Recognize the reserved forced-match hint "# qplp: <id>".
        size_t i = 1;
        while (i < body.size() && body[i] == ' ') ++i;
        if (body.substr(i, 5) == "qplp:") {
            size_t j = i + 5;
            while (j < body.size() && body[j] == ' ') ++j;
            size_t k = j;
            while (k < body.size() && !std::isspace(static_cast<unsigned char>(body[k]))) ++k;
            if (k > j) {
                QplpDirective dir;
                dir.entry_id = std::string(body.substr(j, k - j));
                dir.span = {begin, pos};
                dir.applies_at = pos < src.text.size() ? pos + 1 : pos;
                out.directives.push_back(std::move(dir));
            }
        }
    }

    void lex_token() {
        char c = peek();
        uint32_t begin = pos;

        if (c == ' ') {
            ++pos;
            return;
        }
        if (c == '\t') {
            error("E003", "tab characters are not allowed; use spaces", pos, pos + 1);
            return;
        }
        if (c == '#') {
            consume_comment();
            return;
        }
        if (c == '\n') {
            ++pos;
            if (bracket_depth > 0) return; // implicit continuation
            if (line_has_tokens) push(Tok::Newline, begin, begin + 1);
            line_has_tokens = false;
            at_line_start = true;
            return;
        }
        if (c == '\\' && peek(1) == '\n') { // explicit continuation
            pos += 2;
            return;
        }

        line_has_tokens = true;

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            lex_ident();
            return;
        }
        lex_operator();
    }

    void lex_number() {
        uint32_t begin = pos;
        bool is_float = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        if (peek() == '.' && peek(1) != '.') {
            is_float = true;
            ++pos;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        }
        if (peek() == 'e' || peek() == 'E') {
            uint32_t save = pos;
            ++pos;
            if (peek() == '+' || peek() == '-') ++pos;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                is_float = true;
                while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
            } else {
                pos = save;
            }
        }
        std::string_view text = src.slice({begin, pos});
        Token t;
        t.span = {begin, pos};
        if (is_float) {
            t.kind = Tok::FloatLit;
            double v = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
                error("E001", "malformed float literal", begin, pos);
                return;
            }
            t.float_val = v;
        } else {
            t.kind = Tok::IntLit;
            // Integer literals wrap to 32 bits like every other Int operation.
            uint64_t v = 0;
            for (char ch : text) v = v * 10 + static_cast<uint64_t>(ch - '0');
            t.int_val = static_cast<int32_t>(static_cast<uint32_t>(v));
        }
        out.tokens.push_back(std::move(t));
    }

    void lex_ident() {
        uint32_t begin = pos;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos;
        std::string_view text = src.slice({begin, pos});
        Token t;
        t.span = {begin, pos};
        auto kw = keyword_table().find(text);
        if (kw != keyword_table().end()) {
            t.kind = kw->second;
        } else if (unsupported_table().count(text)) {
            t.kind = Tok::KwUnsupported;
            t.text = std::string(text);
        } else {
            t.kind = Tok::Ident;
            t.text = std::string(text);
        }
        out.tokens.push_back(std::move(t));
    }

    void lex_operator() {
        uint32_t begin = pos;
        auto two = [&](char a, char b) { return peek() == a && peek(1) == b; };
        auto emit = [&](Tok kind, uint32_t len) {
            pos += len;
            push(kind, begin, pos);
        };

        if (two('*', '*')) {
            if (peek(2) == '=') {
                error("E001", "operator '**=' is not supported", begin, begin + 3);
                return;
            }
            emit(Tok::DoubleStar, 2);
            return;
        }
        if (two('/', '/')) {
            if (peek(2) == '=') {
                emit(Tok::DoubleSlashEq, 3);
            } else {
                emit(Tok::DoubleSlash, 2);
            }
            return;
        }
        if (two('-', '>')) { emit(Tok::Arrow, 2); return; }
        if (two('=', '=')) { emit(Tok::EqEq, 2); return; }
        if (two('!', '=')) { emit(Tok::NotEq, 2); return; }
        if (two('<', '=')) { emit(Tok::Le, 2); return; }
        if (two('>', '=')) { emit(Tok::Ge, 2); return; }
        if (two('+', '=')) { emit(Tok::PlusEq, 2); return; }
        if (two('-', '=')) { emit(Tok::MinusEq, 2); return; }
        if (two('*', '=')) { emit(Tok::StarEq, 2); return; }
        if (two('/', '=')) { emit(Tok::SlashEq, 2); return; }
        if (two('%', '=')) { emit(Tok::PercentEq, 2); return; }

        switch (peek()) {
        case '+': emit(Tok::Plus, 1); return;
        case '-': emit(Tok::Minus, 1); return;
        case '*': emit(Tok::Star, 1); return;
        case '/': emit(Tok::Slash, 1); return;
        case '%': emit(Tok::Percent, 1); return;
        case '(':
            ++bracket_depth;
            emit(Tok::LParen, 1);
            return;
        case ')':
            if (bracket_depth > 0) --bracket_depth;
            emit(Tok::RParen, 1);
            return;
        case '[':
            ++bracket_depth;
            emit(Tok::LBracket, 1);
            return;
        case ']':
            if (bracket_depth > 0) --bracket_depth;
            emit(Tok::RBracket, 1);
            return;
        case ',': emit(Tok::Comma, 1); return;
        case ':': emit(Tok::Colon, 1); return;
        case ';': emit(Tok::Semicolon, 1); return;
        case '<': emit(Tok::Lt, 1); return;
        case '>': emit(Tok::Gt, 1); return;
        case '=': emit(Tok::Assign, 1); return;
        default:
            error("E001",
                  std::string("unexpected character '") + peek() + "'", begin, begin + 1);
        }
    }
};

} // namespace

std::optional<LexResult> lex_module(const SourceModule& src, Diagnostics& diags) {
    Lexer lexer(src, diags);
    lexer.run();
    if (lexer.failed) return std::nullopt;
    return std::move(lexer.out);
}

} // namespace cliq
