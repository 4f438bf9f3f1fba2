#include "cliq/qasm_parser.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>

namespace cliq {

namespace {

// ---------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------

enum class QTok : uint8_t {
    End,
    Ident,
    Int,
    Float,
    String,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Colon,
    At,
    Arrow,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Bang,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    NotEq,
    AndAnd,
    OrOr,
};

struct QToken {
    QTok kind = QTok::End;
    std::string text;  // Ident/String; raw spelling for Int/Float
    int64_t int_val = 0;
    double float_val = 0.0;
    int line = 1;
};

struct QasmParseError {};

struct QLexer {
    const std::string& text;
    Diagnostics& diags;
    size_t pos = 0;
    int line = 1;
    std::vector<QToken> tokens;

    QLexer(const std::string& t, Diagnostics& d) : text(t), diags(d) {}

    char peek(size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        diags.error("E061", msg + " (line " + std::to_string(line) + ")");
        throw QasmParseError{};
    }

    void push(QTok kind, size_t len, std::string tok_text = {}) {
        QToken t;
        t.kind = kind;
        t.text = std::move(tok_text);
        t.line = line;
        pos += len;
        tokens.push_back(std::move(t));
    }

    void run() {
        while (pos < text.size()) {
            char c = peek();
            if (c == '\n') {
                ++line;
                ++pos;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos;
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                lex_number();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t begin = pos;
                while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos;
                QToken t;
                t.kind = QTok::Ident;
                t.text = text.substr(begin, pos - begin);
                t.line = line;
                tokens.push_back(std::move(t));
                continue;
            }
            if (c == '"') {
                size_t begin = ++pos;
                while (pos < text.size() && text[pos] != '"' && text[pos] != '\n') ++pos;
                if (peek() != '"') fail("unterminated string literal");
                QToken t;
                t.kind = QTok::String;
                t.text = text.substr(begin, pos - begin);
                t.line = line;
                ++pos;
                tokens.push_back(std::move(t));
                continue;
            }
            lex_operator();
        }
        QToken end;
        end.kind = QTok::End;
        end.line = line;
        tokens.push_back(std::move(end));
    }

    void lex_number() {
        size_t begin = pos;
        bool is_float = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        if (peek() == '.') {
            is_float = true;
            ++pos;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        }
        if (peek() == 'e' || peek() == 'E') {
            size_t save = pos;
            ++pos;
            if (peek() == '+' || peek() == '-') ++pos;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                is_float = true;
                while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
            } else {
                pos = save;
            }
        }
        std::string raw = text.substr(begin, pos - begin);
        QToken t;
        t.line = line;
        t.text = raw;
        if (is_float) {
            t.kind = QTok::Float;
            double v = 0;
            auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
            if (res.ec != std::errc{}) fail("malformed float literal '" + raw + "'");
            t.float_val = v;
        } else {
            t.kind = QTok::Int;
            // Wraps modulo 2^32, matching the source language's Int.
            uint64_t v = 0;
            for (char ch : raw) v = v * 10 + static_cast<uint64_t>(ch - '0');
            t.int_val = static_cast<int32_t>(static_cast<uint32_t>(v));
        }
        tokens.push_back(std::move(t));
    }

    void lex_operator() {
        auto two = [&](char a, char b) { return peek() == a && peek(1) == b; };
        if (two('-', '>')) return push(QTok::Arrow, 2);
        if (two('=', '=')) return push(QTok::EqEq, 2);
        if (two('!', '=')) return push(QTok::NotEq, 2);
        if (two('<', '=')) return push(QTok::Le, 2);
        if (two('>', '=')) return push(QTok::Ge, 2);
        if (two('&', '&')) return push(QTok::AndAnd, 2);
        if (two('|', '|')) return push(QTok::OrOr, 2);
        switch (peek()) {
        case '{': return push(QTok::LBrace, 1);
        case '}': return push(QTok::RBrace, 1);
        case '(': return push(QTok::LParen, 1);
        case ')': return push(QTok::RParen, 1);
        case '[': return push(QTok::LBracket, 1);
        case ']': return push(QTok::RBracket, 1);
        case ',': return push(QTok::Comma, 1);
        case ';': return push(QTok::Semicolon, 1);
        case ':': return push(QTok::Colon, 1);
        case '@': return push(QTok::At, 1);
        case '=': return push(QTok::Assign, 1);
        case '+': return push(QTok::Plus, 1);
        case '-': return push(QTok::Minus, 1);
        case '*': return push(QTok::Star, 1);
        case '/': return push(QTok::Slash, 1);
        case '%': return push(QTok::Percent, 1);
        case '!': return push(QTok::Bang, 1);
        case '<': return push(QTok::Lt, 1);
        case '>': return push(QTok::Gt, 1);
        default: fail(std::string("unexpected character '") + peek() + "'");
        }
    }
};

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

bool is_gate_name(const std::string& s) {
    return s == "h" || s == "x" || s == "z" || s == "cx";
}

struct QParser {
    const std::vector<QToken>& toks;
    Diagnostics& diags;
    size_t pos = 0;

    QParser(const std::vector<QToken>& t, Diagnostics& d) : toks(t), diags(d) {}

    const QToken& peek(size_t ahead = 0) const {
        size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const QToken& advance() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
    bool check(QTok k) const { return peek().kind == k; }
    bool check_ident(const char* word) const {
        return peek().kind == QTok::Ident && peek().text == word;
    }
    bool match(QTok k) {
        if (!check(k)) return false;
        advance();
        return true;
    }
    bool match_ident(const char* word) {
        if (!check_ident(word)) return false;
        advance();
        return true;
    }

    [[noreturn]] void fail(const std::string& msg, const char* code = "E061") {
        diags.error(code, msg + " (line " + std::to_string(peek().line) + ")");
        throw QasmParseError{};
    }

    const QToken& expect(QTok k, const char* what) {
        if (!check(k)) fail(std::string("expected ") + what);
        return toks[pos++];
    }
    void expect_ident(const char* word) {
        if (!check_ident(word)) fail(std::string("expected '") + word + "'");
        advance();
    }

    // -- types --

    // int[32] | float[64] | bool
    std::optional<QasmType> try_scalar_type() {
        if (check_ident("int") && peek(1).kind == QTok::LBracket) {
            advance();
            expect(QTok::LBracket, "'['");
            const QToken& w = expect(QTok::Int, "bit width");
            if (w.int_val != 32) fail("only int[32] is supported", "E062");
            expect(QTok::RBracket, "']'");
            return QasmType{QasmType::Kind::Int, 0};
        }
        if (check_ident("float") && peek(1).kind == QTok::LBracket) {
            advance();
            expect(QTok::LBracket, "'['");
            const QToken& w = expect(QTok::Int, "bit width");
            if (w.int_val != 64) fail("only float[64] is supported", "E062");
            expect(QTok::RBracket, "']'");
            return QasmType{QasmType::Kind::Float, 0};
        }
        if (check_ident("bool") && peek(1).kind != QTok::LBracket) {
            advance();
            return QasmType{QasmType::Kind::Bool, 0};
        }
        return std::nullopt;
    }

    int32_t expect_size() {
        const QToken& t = expect(QTok::Int, "a size");
        if (t.int_val < 1) fail("size must be at least 1", "E062");
        return static_cast<int32_t>(t.int_val);
    }

    // array[int[32], N]
    QasmType parse_array_type() {
        expect_ident("array");
        expect(QTok::LBracket, "'['");
        expect_ident("int");
        expect(QTok::LBracket, "'['");
        const QToken& w = expect(QTok::Int, "bit width");
        if (w.int_val != 32) fail("array element type must be int[32]", "E062");
        expect(QTok::RBracket, "']'");
        expect(QTok::Comma, "','");
        int32_t n = expect_size();
        expect(QTok::RBracket, "']'");
        return QasmType{QasmType::Kind::IntArray, n};
    }

    bool at_declaration() const {
        if (check_ident("qubit") || check_ident("bit") || check_ident("array")) return true;
        if ((check_ident("int") || check_ident("float")) && peek(1).kind == QTok::LBracket) {
            // "int[32] name" is a declaration; "int[32](expr)" is a cast.
            return peek(4).kind == QTok::Ident;
        }
        if (check_ident("bool") && peek(1).kind == QTok::Ident) return true;
        return false;
    }

    QasmDecl parse_declaration() {
        QasmDecl d;
        if (check_ident("qubit")) {
            advance();
            expect(QTok::LBracket, "'['");
            d.type = {QasmType::Kind::QubitReg, expect_size()};
            expect(QTok::RBracket, "']'");
        } else if (check_ident("bit")) {
            advance();
            expect(QTok::LBracket, "'['");
            d.type = {QasmType::Kind::BitReg, expect_size()};
            expect(QTok::RBracket, "']'");
        } else if (check_ident("array")) {
            d.type = parse_array_type();
        } else {
            auto t = try_scalar_type();
            if (!t) fail("expected a declaration");
            d.type = *t;
        }
        d.name = expect(QTok::Ident, "an identifier").text;
        if (match(QTok::Assign)) {
            if (d.type.kind != QasmType::Kind::IntArray)
                fail("initializers are only supported on array declarations", "E062");
            d.has_init = true;
            expect(QTok::LBrace, "'{'");
            while (true) {
                bool neg = match(QTok::Minus);
                const QToken& v = expect(QTok::Int, "an integer");
                int64_t val = neg ? -v.int_val : v.int_val;
                d.init.push_back(static_cast<int32_t>(static_cast<uint32_t>(val)));
                if (!match(QTok::Comma)) break;
            }
            expect(QTok::RBrace, "'}'");
            if (static_cast<int32_t>(d.init.size()) != d.type.size)
                fail("array initializer length does not match the declared size", "E062");
        }
        expect(QTok::Semicolon, "';'");
        return d;
    }

    // -- expressions (C-like precedence) --

    QasmExprPtr parse_expr() { return parse_or(); }

    QasmExprPtr make_binary(const char* op, QasmExprPtr l, QasmExprPtr r) {
        auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::Binary);
        e->name = op;
        e->args.push_back(std::move(l));
        e->args.push_back(std::move(r));
        return e;
    }

    QasmExprPtr parse_or() {
        auto lhs = parse_and();
        while (match(QTok::OrOr)) lhs = make_binary("||", std::move(lhs), parse_and());
        return lhs;
    }
    QasmExprPtr parse_and() {
        auto lhs = parse_equality();
        while (match(QTok::AndAnd)) lhs = make_binary("&&", std::move(lhs), parse_equality());
        return lhs;
    }
    QasmExprPtr parse_equality() {
        auto lhs = parse_relational();
        while (check(QTok::EqEq) || check(QTok::NotEq)) {
            const char* op = check(QTok::EqEq) ? "==" : "!=";
            advance();
            lhs = make_binary(op, std::move(lhs), parse_relational());
        }
        return lhs;
    }
    QasmExprPtr parse_relational() {
        auto lhs = parse_additive();
        while (true) {
            const char* op = nullptr;
            if (check(QTok::Lt)) op = "<";
            else if (check(QTok::Le)) op = "<=";
            else if (check(QTok::Gt)) op = ">";
            else if (check(QTok::Ge)) op = ">=";
            if (!op) return lhs;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_additive());
        }
    }
    QasmExprPtr parse_additive() {
        auto lhs = parse_multiplicative();
        while (check(QTok::Plus) || check(QTok::Minus)) {
            const char* op = check(QTok::Plus) ? "+" : "-";
            advance();
            lhs = make_binary(op, std::move(lhs), parse_multiplicative());
        }
        return lhs;
    }
    QasmExprPtr parse_multiplicative() {
        auto lhs = parse_unary();
        while (true) {
            const char* op = nullptr;
            if (check(QTok::Star)) op = "*";
            else if (check(QTok::Slash)) op = "/";
            else if (check(QTok::Percent)) op = "%";
            if (!op) return lhs;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_unary());
        }
    }
    QasmExprPtr parse_unary() {
        if (check(QTok::Minus) || check(QTok::Bang)) {
            const char* op = check(QTok::Minus) ? "-" : "!";
            advance();
            auto operand = parse_unary();
            // Canonicalize negated literals so "-5" always denotes the
            // same tree whether written directly or via templates.
            if (op[0] == '-' && operand->kind == QasmExpr::Kind::IntLit) {
                operand->int_val = static_cast<int32_t>(-static_cast<uint32_t>(operand->int_val));
                return operand;
            }
            if (op[0] == '-' && operand->kind == QasmExpr::Kind::FloatLit) {
                operand->float_val = -operand->float_val;
                return operand;
            }
            auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::Unary);
            e->name = op;
            e->args.push_back(std::move(operand));
            return e;
        }
        return parse_primary();
    }

    QasmExprPtr parse_primary() {
        const QToken& t = peek();
        if (t.kind == QTok::Int) {
            advance();
            auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::IntLit);
            e->int_val = t.int_val;
            return e;
        }
        if (t.kind == QTok::Float) {
            advance();
            auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::FloatLit);
            e->float_val = t.float_val;
            return e;
        }
        if (t.kind == QTok::LParen) {
            advance();
            auto inner = parse_expr();
            expect(QTok::RParen, "')'");
            return inner;
        }
        if (t.kind == QTok::Ident) {
            if (t.text == "true" || t.text == "false") {
                advance();
                auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::BoolLit);
                e->bool_val = t.text == "true";
                return e;
            }
            // Casts: int[32](expr), float[64](expr)
            if ((t.text == "int" || t.text == "float") && peek(1).kind == QTok::LBracket) {
                auto type = try_scalar_type();
                if (!type) fail("malformed cast");
                expect(QTok::LParen, "'('");
                auto e = std::make_unique<QasmExpr>(type->kind == QasmType::Kind::Int
                                                        ? QasmExpr::Kind::CastInt
                                                        : QasmExpr::Kind::CastFloat);
                e->args.push_back(parse_expr());
                expect(QTok::RParen, "')'");
                return e;
            }
            advance();
            if (check(QTok::LParen)) {
                advance();
                auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::Call);
                e->name = t.text;
                if (!check(QTok::RParen)) {
                    e->args.push_back(parse_expr());
                    while (match(QTok::Comma)) e->args.push_back(parse_expr());
                }
                expect(QTok::RParen, "')'");
                return e;
            }
            if (check(QTok::LBracket)) {
                advance();
                auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::Index);
                e->name = t.text;
                e->args.push_back(parse_expr());
                expect(QTok::RBracket, "']'");
                return e;
            }
            auto e = std::make_unique<QasmExpr>(QasmExpr::Kind::Ident);
            e->name = t.text;
            return e;
        }
        fail("expected an expression");
    }

    // -- statements --

    // Any "ident ident" pair reads as a gate application so unknown gate
    // names get the subset diagnostic rather than a generic syntax error.
    bool at_gate_statement() const {
        if (check_ident("ctrl")) return true;
        return peek().kind == QTok::Ident && peek(1).kind == QTok::Ident;
    }

    QasmStmtPtr parse_statement() {
        if (check_ident("if")) return parse_if();
        if (check_ident("while")) return parse_while();
        if (check_ident("for")) return parse_for();
        if (check_ident("break")) {
            advance();
            expect(QTok::Semicolon, "';'");
            return std::make_unique<QasmStmt>(QasmStmt::Kind::Break);
        }
        if (check_ident("continue")) {
            advance();
            expect(QTok::Semicolon, "';'");
            return std::make_unique<QasmStmt>(QasmStmt::Kind::Continue);
        }
        if (check_ident("return")) {
            advance();
            auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::Return);
            s->a = parse_expr();
            expect(QTok::Semicolon, "';'");
            return s;
        }
        if (check_ident("reset")) {
            advance();
            auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::Reset);
            s->source = expect(QTok::Ident, "a qubit register").text;
            expect(QTok::Semicolon, "';'");
            return s;
        }
        if (at_gate_statement()) return parse_gate();

        // assignment / element assignment / measure / expression statement
        if (peek().kind == QTok::Ident && peek(1).kind == QTok::Assign) {
            std::string target = advance().text;
            advance(); // '='
            if (check_ident("measure")) {
                advance();
                auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::Measure);
                s->target = std::move(target);
                s->source = expect(QTok::Ident, "a qubit register").text;
                expect(QTok::Semicolon, "';'");
                return s;
            }
            auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::Assign);
            s->target = std::move(target);
            s->a = parse_expr();
            expect(QTok::Semicolon, "';'");
            return s;
        }
        if (peek().kind == QTok::Ident && peek(1).kind == QTok::LBracket) {
            // could be element assignment; otherwise an expression statement
            size_t save = pos;
            std::string target = advance().text;
            advance(); // '['
            auto index = parse_expr();
            expect(QTok::RBracket, "']'");
            if (match(QTok::Assign)) {
                auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::AssignElem);
                s->target = std::move(target);
                s->a = std::move(index);
                s->b = parse_expr();
                expect(QTok::Semicolon, "';'");
                return s;
            }
            pos = save; // expression statement such as "a[i];"
        }
        auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::ExprStmt);
        s->a = parse_expr();
        expect(QTok::Semicolon, "';'");
        return s;
    }

    std::vector<QasmStmtPtr> parse_block() {
        expect(QTok::LBrace, "'{'");
        std::vector<QasmStmtPtr> body;
        while (!check(QTok::RBrace) && !check(QTok::End)) {
            body.push_back(parse_statement());
        }
        expect(QTok::RBrace, "'}'");
        return body;
    }

    QasmStmtPtr parse_if() {
        expect_ident("if");
        expect(QTok::LParen, "'('");
        auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::If);
        s->a = parse_expr();
        expect(QTok::RParen, "')'");
        s->body = parse_block();
        if (match_ident("else")) {
            if (check_ident("if")) {
                s->orelse.push_back(parse_if());
            } else {
                s->orelse = parse_block();
            }
        }
        return s;
    }

    QasmStmtPtr parse_while() {
        expect_ident("while");
        expect(QTok::LParen, "'('");
        auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::While);
        s->a = parse_expr();
        expect(QTok::RParen, "')'");
        s->body = parse_block();
        return s;
    }

    // for int[32] i in [start : (step :)? stop] { ... }
    QasmStmtPtr parse_for() {
        expect_ident("for");
        auto t = try_scalar_type();
        if (!t || t->kind != QasmType::Kind::Int) fail("loop variable must be int[32]", "E062");
        auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::For);
        s->target = expect(QTok::Ident, "the loop variable").text;
        expect_ident("in");
        expect(QTok::LBracket, "'['");
        auto first = parse_expr();
        expect(QTok::Colon, "':'");
        auto second = parse_expr();
        if (match(QTok::Colon)) {
            s->a = std::move(first);
            s->c = std::move(second); // step
            s->b = parse_expr();
        } else {
            s->a = std::move(first);
            s->b = std::move(second);
        }
        expect(QTok::RBracket, "']'");
        s->body = parse_block();
        return s;
    }

    QasmStmtPtr parse_gate() {
        auto s = std::make_unique<QasmStmt>(QasmStmt::Kind::Gate);
        if (match_ident("ctrl")) {
            expect(QTok::LParen, "'('");
            const QToken& n = expect(QTok::Int, "control count");
            if (n.int_val < 1) fail("ctrl modifier needs at least one control", "E062");
            s->gate.ctrl_count = static_cast<int>(n.int_val);
            expect(QTok::RParen, "')'");
            expect(QTok::At, "'@'");
        }
        const QToken& g = expect(QTok::Ident, "a gate name");
        if (!is_gate_name(g.text))
            fail("gate '" + g.text + "' is outside the supported subset", "E062");
        s->gate.gate = g.text;
        while (true) {
            const QToken& reg = expect(QTok::Ident, "a qubit operand");
            expect(QTok::LBracket, "'['");
            const QToken& idx = expect(QTok::Int, "a literal qubit index");
            expect(QTok::RBracket, "']'");
            s->gate.operands.emplace_back(reg.text, static_cast<int32_t>(idx.int_val));
            if (!match(QTok::Comma)) break;
        }
        expect(QTok::Semicolon, "';'");
        return s;
    }

    // -- defs and program --

    QasmDef parse_def() {
        expect_ident("def");
        QasmDef def;
        def.name = expect(QTok::Ident, "the subroutine name").text;
        expect(QTok::LParen, "'('");
        if (!check(QTok::RParen)) {
            do {
                QasmParam p;
                if (match_ident("readonly")) {
                    p.type = parse_array_type();
                } else {
                    auto t = try_scalar_type();
                    if (!t) fail("expected a parameter type");
                    p.type = *t;
                }
                p.name = expect(QTok::Ident, "the parameter name").text;
                def.params.push_back(std::move(p));
            } while (match(QTok::Comma));
        }
        expect(QTok::RParen, "')'");
        expect(QTok::Arrow, "'->'");
        auto ret = try_scalar_type();
        if (!ret) fail("subroutines must declare a scalar return type", "E062");
        def.ret = *ret;

        expect(QTok::LBrace, "'{'");
        while (at_declaration()) def.locals.push_back(parse_declaration());
        while (!check(QTok::RBrace) && !check(QTok::End)) {
            def.body.push_back(parse_statement());
        }
        expect(QTok::RBrace, "'}'");
        return def;
    }

    QasmProgram parse_program() {
        // version line: OPENQASM 3.0;
        if (!check_ident("OPENQASM")) fail("missing 'OPENQASM 3.0;' version line");
        advance();
        if (check(QTok::Float) && peek().text == "3.0") {
            advance();
        } else {
            std::string got = peek().text.empty() ? "?" : peek().text;
            diags.error("E062", "unsupported OpenQASM version '" + got + "' (expected 3.0)");
            throw QasmParseError{};
        }
        expect(QTok::Semicolon, "';'");

        QasmProgram prog;
        if (check_ident("include")) {
            advance();
            const QToken& file = expect(QTok::String, "an include path");
            if (file.text != "stdgates.inc")
                fail("only include \"stdgates.inc\" is supported", "E062");
            expect(QTok::Semicolon, "';'");
            prog.include_stdgates = true;
        }
        while (check_ident("def")) prog.defs.push_back(parse_def());
        while (at_declaration()) prog.decls.push_back(parse_declaration());
        while (!check(QTok::End)) {
            if (at_declaration())
                fail("declarations must precede statements in this subset", "E062");
            if (check_ident("def")) fail("subroutines must precede declarations", "E062");
            prog.stmts.push_back(parse_statement());
        }
        return prog;
    }
};

// ---------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------

struct QasmValidationError {};

struct Validator {
    Diagnostics& diags;
    const QasmProgram& prog;

    struct VarInfo {
        QasmType type;
    };
    std::map<std::string, VarInfo> globals;
    std::map<std::string, const QasmDef*> defs;
    // loop variables, innermost last
    std::vector<std::pair<std::string, QasmType>> loop_vars;
    const QasmDef* current_def = nullptr;
    std::map<std::string, VarInfo> local_vars;
    int loop_depth = 0;

    Validator(Diagnostics& d, const QasmProgram& p) : diags(d), prog(p) {}

    [[noreturn]] void fail(const char* code, const std::string& msg) {
        diags.error(code, msg);
        throw QasmValidationError{};
    }

    bool run() {
        try {
            for (const auto& def : prog.defs) {
                if (defs.count(def.name)) fail("E062", "subroutine '" + def.name + "' redefined");
                validate_def(def);
                defs[def.name] = &def;
            }
            int64_t qubits = 0;
            for (const auto& d : prog.decls) {
                declare(globals, d);
                if (d.type.kind == QasmType::Kind::QubitReg) qubits += d.type.size;
            }
            if (qubits > 16) {
                fail("E063", "program declares " + std::to_string(qubits) +
                                 " qubits, exceeding the simulator limit of 16");
            }
            for (const auto& s : prog.stmts) validate_stmt(*s, /*in_def=*/false);
            return true;
        } catch (const QasmValidationError&) {
            return false;
        }
    }

    void declare(std::map<std::string, VarInfo>& scope, const QasmDecl& d) {
        if (scope.count(d.name) || defs.count(d.name))
            fail("E062", "'" + d.name + "' is declared twice");
        scope[d.name] = {d.type};
    }

    const QasmType* lookup(const std::string& name) {
        for (auto it = loop_vars.rbegin(); it != loop_vars.rend(); ++it) {
            if (it->first == name) return &it->second;
        }
        if (current_def) {
            auto it = local_vars.find(name);
            if (it != local_vars.end()) return &it->second.type;
            return nullptr; // defs cannot see globals
        }
        auto it = globals.find(name);
        if (it != globals.end()) return &it->second.type;
        return nullptr;
    }

    void validate_def(const QasmDef& def) {
        current_def = &def;
        local_vars.clear();
        for (const auto& p : def.params) {
            if (local_vars.count(p.name)) fail("E062", "duplicate parameter '" + p.name + "'");
            local_vars[p.name] = {p.type};
        }
        for (const auto& d : def.locals) {
            if (d.type.kind == QasmType::Kind::QubitReg || d.type.kind == QasmType::Kind::BitReg)
                fail("E062", "quantum declarations are not allowed inside subroutines");
            declare(local_vars, d);
        }
        bool returns = false;
        for (const auto& s : def.body) {
            validate_stmt(*s, /*in_def=*/true);
            if (s->kind == QasmStmt::Kind::Return) returns = true;
            if (s->kind == QasmStmt::Kind::If && !s->orelse.empty()) {
                // crude but sufficient for the emitted shape: a trailing
                // if/else whose arms both end in return also terminates
                bool then_ret = !s->body.empty() && s->body.back()->kind == QasmStmt::Kind::Return;
                bool else_ret =
                    !s->orelse.empty() && s->orelse.back()->kind == QasmStmt::Kind::Return;
                if (then_ret && else_ret) returns = true;
            }
        }
        if (!returns) fail("E062", "subroutine '" + def.name + "' has no terminating return");
        current_def = nullptr;
        local_vars.clear();
    }

    void validate_stmt(const QasmStmt& s, bool in_def) {
        switch (s.kind) {
        case QasmStmt::Kind::Assign: {
            const QasmType* t = lookup(s.target);
            if (!t) fail("E061", "assignment to undeclared identifier '" + s.target + "'");
            if (t->kind == QasmType::Kind::QubitReg || t->kind == QasmType::Kind::BitReg ||
                t->kind == QasmType::Kind::IntArray)
                fail("E062", "assignment target '" + s.target + "' must be a scalar");
            if (is_loop_var(s.target)) fail("E062", "cannot assign to loop variable");
            QasmType vt = type_of(*s.a);
            if (vt != *t)
                fail("E062", "type mismatch assigning to '" + s.target + "'");
            return;
        }
        case QasmStmt::Kind::AssignElem: {
            const QasmType* t = lookup(s.target);
            if (!t) fail("E061", "undeclared identifier '" + s.target + "'");
            if (t->kind != QasmType::Kind::IntArray)
                fail("E062", "'" + s.target + "' is not an array");
            require_int(*s.a, "array index");
            require_int(*s.b, "array element value");
            return;
        }
        case QasmStmt::Kind::ExprStmt: type_of(*s.a); return;
        case QasmStmt::Kind::If: {
            require_bool(*s.a, "if condition");
            for (const auto& st : s.body) validate_stmt(*st, in_def);
            for (const auto& st : s.orelse) validate_stmt(*st, in_def);
            return;
        }
        case QasmStmt::Kind::While: {
            require_bool(*s.a, "while condition");
            ++loop_depth;
            for (const auto& st : s.body) validate_stmt(*st, in_def);
            --loop_depth;
            return;
        }
        case QasmStmt::Kind::For: {
            require_int(*s.a, "range start");
            require_int(*s.b, "range end");
            if (s.c) require_int(*s.c, "range step");
            if (lookup(s.target)) fail("E062", "loop variable '" + s.target + "' shadows a declaration");
            loop_vars.emplace_back(s.target, QasmType{QasmType::Kind::Int, 0});
            ++loop_depth;
            for (const auto& st : s.body) validate_stmt(*st, in_def);
            --loop_depth;
            loop_vars.pop_back();
            return;
        }
        case QasmStmt::Kind::Break:
        case QasmStmt::Kind::Continue:
            if (loop_depth == 0) fail("E061", "break/continue outside a loop");
            return;
        case QasmStmt::Kind::Return: {
            if (!current_def) fail("E062", "return outside a subroutine");
            QasmType t = type_of(*s.a);
            if (t != current_def->ret) fail("E062", "return type mismatch");
            return;
        }
        case QasmStmt::Kind::Gate: validate_gate(s.gate, in_def); return;
        case QasmStmt::Kind::Measure: {
            if (in_def) fail("E062", "measure is not allowed inside subroutines");
            const QasmType* bt = lookup(s.target);
            if (!bt) fail("E061", "undeclared identifier '" + s.target + "'");
            const QasmType* qt = lookup(s.source);
            if (!qt) fail("E061", "undeclared identifier '" + s.source + "'");
            if (bt->kind != QasmType::Kind::BitReg || qt->kind != QasmType::Kind::QubitReg)
                fail("E062", "measure must store a qubit register into a bit register");
            if (bt->size != qt->size)
                fail("E062", "bit register size does not match the measured qubit register");
            return;
        }
        case QasmStmt::Kind::Reset: {
            if (in_def) fail("E062", "reset is not allowed inside subroutines");
            const QasmType* qt = lookup(s.source);
            if (!qt) fail("E061", "undeclared identifier '" + s.source + "'");
            if (qt->kind != QasmType::Kind::QubitReg)
                fail("E062", "reset needs a qubit register");
            return;
        }
        }
    }

    bool is_loop_var(const std::string& name) const {
        for (const auto& [n, t] : loop_vars) {
            if (n == name) return true;
        }
        return false;
    }

    void validate_gate(const QasmGate& g, bool in_def) {
        if (in_def) fail("E062", "gates are not allowed inside subroutines");
        int arity = g.gate == "cx" ? 2 : 1;
        if (static_cast<int>(g.operands.size()) != g.ctrl_count + arity) {
            fail("E062", "gate '" + g.gate + "' expects " + std::to_string(g.ctrl_count + arity) +
                             " operands");
        }
        std::set<int32_t> seen;
        const std::string& reg = g.operands.front().first;
        for (const auto& [r, idx] : g.operands) {
            const QasmType* t = lookup(r);
            if (!t) fail("E061", "gate on undeclared qubit register '" + r + "'");
            if (t->kind != QasmType::Kind::QubitReg)
                fail("E061", "'" + r + "' is not a qubit register");
            if (r != reg)
                fail("E062", "gates across different qubit registers are outside the subset");
            if (idx < 0 || idx >= t->size)
                fail("E062", "qubit index " + std::to_string(idx) + " out of range for '" + r + "'");
            if (!seen.insert(idx).second)
                fail("E062", "repeated qubit operand in gate '" + g.gate + "'");
        }
    }

    void require_int(const QasmExpr& e, const char* what) {
        if (type_of(e).kind != QasmType::Kind::Int)
            fail("E062", std::string(what) + " must be int[32]");
    }
    void require_bool(const QasmExpr& e, const char* what) {
        if (type_of(e).kind != QasmType::Kind::Bool)
            fail("E062", std::string(what) + " must be bool");
    }

    QasmType type_of(const QasmExpr& e) {
        switch (e.kind) {
        case QasmExpr::Kind::IntLit: return {QasmType::Kind::Int, 0};
        case QasmExpr::Kind::FloatLit: return {QasmType::Kind::Float, 0};
        case QasmExpr::Kind::BoolLit: return {QasmType::Kind::Bool, 0};
        case QasmExpr::Kind::Ident: {
            const QasmType* t = lookup(e.name);
            if (!t) fail("E061", "undeclared identifier '" + e.name + "'");
            if (t->kind == QasmType::Kind::QubitReg)
                fail("E062", "qubit registers cannot appear in classical expressions");
            return *t;
        }
        case QasmExpr::Kind::Index: {
            const QasmType* t = lookup(e.name);
            if (!t) fail("E061", "undeclared identifier '" + e.name + "'");
            if (t->kind != QasmType::Kind::IntArray)
                fail("E062", "'" + e.name + "' is not an array");
            require_int(*e.args[0], "array index");
            return {QasmType::Kind::Int, 0};
        }
        case QasmExpr::Kind::Unary: {
            QasmType t = type_of(*e.args[0]);
            if (e.name == "!") {
                if (t.kind != QasmType::Kind::Bool) fail("E062", "'!' needs a bool operand");
                return t;
            }
            if (t.kind != QasmType::Kind::Int && t.kind != QasmType::Kind::Float)
                fail("E062", "unary '-' needs a numeric operand");
            return t;
        }
        case QasmExpr::Kind::Binary: return type_of_binary(e);
        case QasmExpr::Kind::Call: {
            auto it = defs.find(e.name);
            if (it == defs.end()) fail("E061", "call to undeclared subroutine '" + e.name + "'");
            const QasmDef& def = *it->second;
            if (e.args.size() != def.params.size())
                fail("E062", "subroutine '" + e.name + "' expects " +
                                 std::to_string(def.params.size()) + " argument(s)");
            for (size_t i = 0; i < e.args.size(); ++i) {
                QasmType at = type_of(*e.args[i]);
                if (at != def.params[i].type)
                    fail("E062", "argument " + std::to_string(i + 1) + " of '" + e.name +
                                     "' has the wrong type");
            }
            return def.ret;
        }
        case QasmExpr::Kind::CastInt: {
            QasmType t = type_of_cast_arg(*e.args[0]);
            if (t.kind == QasmType::Kind::IntArray || t.kind == QasmType::Kind::QubitReg)
                fail("E062", "cannot cast this operand to int[32]");
            return {QasmType::Kind::Int, 0};
        }
        case QasmExpr::Kind::CastFloat: {
            QasmType t = type_of_cast_arg(*e.args[0]);
            if (t.kind != QasmType::Kind::Int && t.kind != QasmType::Kind::Float)
                fail("E062", "cannot cast this operand to float[64]");
            return {QasmType::Kind::Float, 0};
        }
        }
        fail("E062", "unreachable expression kind");
    }

    // Bit registers are only usable as a direct cast operand.
    QasmType type_of_cast_arg(const QasmExpr& e) {
        if (e.kind == QasmExpr::Kind::Ident) {
            const QasmType* t = lookup(e.name);
            if (!t) fail("E061", "undeclared identifier '" + e.name + "'");
            return *t;
        }
        return type_of(e);
    }

    QasmType type_of_binary(const QasmExpr& e) {
        const std::string& op = e.name;
        QasmType l = type_of(*e.args[0]);
        QasmType r = type_of(*e.args[1]);
        auto numeric = [](const QasmType& t) {
            return t.kind == QasmType::Kind::Int || t.kind == QasmType::Kind::Float;
        };
        if (op == "&&" || op == "||") {
            if (l.kind != QasmType::Kind::Bool || r.kind != QasmType::Kind::Bool)
                fail("E062", "'" + op + "' needs bool operands");
            return {QasmType::Kind::Bool, 0};
        }
        if (op == "==" || op == "!=") {
            if (l.kind == QasmType::Kind::Bool && r.kind == QasmType::Kind::Bool)
                return {QasmType::Kind::Bool, 0};
            if (numeric(l) && numeric(r)) return {QasmType::Kind::Bool, 0};
            fail("E062", "'" + op + "' operands are not comparable");
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            if (!numeric(l) || !numeric(r)) fail("E062", "'" + op + "' needs numeric operands");
            return {QasmType::Kind::Bool, 0};
        }
        if (op == "%") {
            if (l.kind != QasmType::Kind::Int || r.kind != QasmType::Kind::Int)
                fail("E062", "'%' needs int[32] operands");
            return {QasmType::Kind::Int, 0};
        }
        if (!numeric(l) || !numeric(r)) fail("E062", "'" + op + "' needs numeric operands");
        if (l.kind == QasmType::Kind::Float || r.kind == QasmType::Kind::Float)
            return {QasmType::Kind::Float, 0};
        return {QasmType::Kind::Int, 0};
    }
};

} // namespace

std::optional<QasmProgram> parse_qasm(const std::string& text, Diagnostics& diags) {
    try {
        QLexer lexer(text, diags);
        lexer.run();
        QParser parser(lexer.tokens, diags);
        QasmProgram prog = parser.parse_program();
        if (!validate_qasm(prog, diags)) return std::nullopt;
        return prog;
    } catch (const QasmParseError&) {
        return std::nullopt;
    }
}

std::optional<std::vector<QasmStmtPtr>> parse_qasm_statements(const std::string& text,
                                                              Diagnostics& diags) {
    try {
        QLexer lexer(text, diags);
        lexer.run();
        QParser parser(lexer.tokens, diags);
        std::vector<QasmStmtPtr> out;
        while (!parser.check(QTok::End)) out.push_back(parser.parse_statement());
        return out;
    } catch (const QasmParseError&) {
        return std::nullopt;
    }
}

std::optional<QasmDecl> parse_qasm_declaration(const std::string& text, Diagnostics& diags) {
    try {
        QLexer lexer(text, diags);
        lexer.run();
        QParser parser(lexer.tokens, diags);
        QasmDecl d = parser.parse_declaration();
        if (!parser.check(QTok::End)) {
            diags.error("E061", "trailing input after declaration");
            return std::nullopt;
        }
        return d;
    } catch (const QasmParseError&) {
        return std::nullopt;
    }
}

bool validate_qasm(const QasmProgram& program, Diagnostics& diags) {
    Validator v(diags, program);
    return v.run();
}

} // namespace cliq
