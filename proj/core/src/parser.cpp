#include "cliq/parser.hpp"

#include <cassert>

namespace cliq {

namespace {

struct ParseError {}; // unwinds to parse_module; diagnostics already recorded

struct Parser {
    const std::vector<Token>& toks;
    Diagnostics& diags;
    size_t pos = 0;
    int loop_depth = 0;
    bool in_function = false;

    Parser(const std::vector<Token>& t, Diagnostics& d) : toks(t), diags(d) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& advance() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
    bool check(Tok kind) const { return peek().kind == kind; }
    bool match(Tok kind) {
        if (!check(kind)) return false;
        advance();
        return true;
    }

    [[noreturn]] void fail(std::string code, std::string msg, Span span) {
        diags.error(std::move(code), std::move(msg), span);
        throw ParseError{};
    }
    [[noreturn]] void fail_here(std::string code, std::string msg) {
        fail(std::move(code), std::move(msg), peek().span);
    }

    const Token& expect(Tok kind, const char* what) {
        if (!check(kind)) {
            reject_unsupported();
            fail_here("E001", std::string("expected ") + what);
        }
        return toks[pos++];
    }

    void reject_unsupported() {
        if (check(Tok::KwUnsupported)) {
            fail_here("E002", "unsupported construct: '" + peek().text + "'");
        }
    }

    std::string expect_ident(const char* what) {
        reject_unsupported();
        const Token& t = expect(Tok::Ident, what);
        if (t.text.rfind("__", 0) == 0) {
            fail("E001", "identifiers beginning with '__' are reserved", t.span);
        }
        return t.text;
    }

    // module: (NEWLINE | statement)* EOF
    AstPtr parse_toplevel() {
        auto mod = make_node(NodeKind::Module, {0, 0});
        while (!check(Tok::EndOfFile)) {
            parse_statement_into(mod->children, /*allow_def=*/true);
        }
        if (!mod->children.empty()) {
            mod->span = {mod->children.front()->span.begin, mod->children.back()->span.end};
        }
        return mod;
    }

    void parse_statement_into(std::vector<AstPtr>& out, bool allow_def) {
        reject_unsupported();
        switch (peek().kind) {
        case Tok::KwIf: out.push_back(parse_if()); return;
        case Tok::KwWhile: out.push_back(parse_while()); return;
        case Tok::KwFor: out.push_back(parse_for()); return;
        case Tok::KwDef:
            if (!allow_def) fail_here("E001", "nested function definitions are not supported");
            out.push_back(parse_def());
            return;
        default: parse_simple_line_into(out); return;
        }
    }

    // simple_stmt (';' simple_stmt)* NEWLINE
    void parse_simple_line_into(std::vector<AstPtr>& out) {
        while (true) {
            auto stmt = parse_simple_stmt();
            if (stmt) out.push_back(std::move(stmt)); // pass produces no node
            if (match(Tok::Semicolon)) {
                if (check(Tok::Newline)) break; // trailing ';'
                continue;
            }
            break;
        }
        expect(Tok::Newline, "end of line");
    }

    AstPtr parse_simple_stmt() {
        reject_unsupported();
        const Token& t = peek();
        switch (t.kind) {
        case Tok::KwPass: advance(); return nullptr;
        case Tok::KwBreak: {
            advance();
            if (loop_depth == 0) fail("E001", "'break' outside loop", t.span);
            return make_node(NodeKind::Break, t.span);
        }
        case Tok::KwContinue: {
            advance();
            if (loop_depth == 0) fail("E001", "'continue' outside loop", t.span);
            return make_node(NodeKind::Continue, t.span);
        }
        case Tok::KwReturn: {
            advance();
            if (!in_function) fail("E001", "'return' outside function", t.span);
            auto node = make_node(NodeKind::Return, t.span);
            if (!check(Tok::Newline) && !check(Tok::Semicolon)) {
                node->children.push_back(parse_expr());
                node->span.end = node->children.back()->span.end;
            }
            return node;
        }
        default: break;
        }

        // assignment | augmented assignment | expression statement
        AstPtr first = parse_expr();
        if (check(Tok::Assign)) {
            advance();
            require_assign_target(*first);
            auto value = parse_expr();
            auto node = make_node(NodeKind::Assign, {first->span.begin, value->span.end});
            node->children.push_back(std::move(first));
            node->children.push_back(std::move(value));
            return node;
        }
        const char* aug = aug_op();
        if (aug) {
            advance();
            require_assign_target(*first);
            auto value = parse_expr();
            auto node = make_node(NodeKind::AugAssign, {first->span.begin, value->span.end});
            node->str_attr = aug;
            node->children.push_back(std::move(first));
            node->children.push_back(std::move(value));
            return node;
        }
        auto node = make_node(NodeKind::ExprStmt, first->span);
        node->children.push_back(std::move(first));
        return node;
    }

    const char* aug_op() {
        switch (peek().kind) {
        case Tok::PlusEq: return "+";
        case Tok::MinusEq: return "-";
        case Tok::StarEq: return "*";
        case Tok::SlashEq: return "/";
        case Tok::DoubleSlashEq: return "//";
        case Tok::PercentEq: return "%";
        default: return nullptr;
        }
    }

    void require_assign_target(const AstNode& node) {
        if (node.kind == NodeKind::Name) return;
        if (node.kind == NodeKind::Index) return;
        fail("E001", "assignment target must be a name or an array element", node.span);
    }

    // block: ':' (simple_line | NEWLINE INDENT statement+ DEDENT)
    std::vector<AstPtr> parse_block() {
        expect(Tok::Colon, "':'");
        std::vector<AstPtr> body;
        if (match(Tok::Newline)) {
            expect(Tok::Indent, "an indented block");
            while (!check(Tok::Dedent) && !check(Tok::EndOfFile)) {
                parse_statement_into(body, /*allow_def=*/false);
            }
            expect(Tok::Dedent, "dedent");
        } else {
            parse_simple_line_into(body);
        }
        return body;
    }

    AstPtr parse_if() {
        const Token& kw = toks[pos];
        advance();
        auto cond = parse_expr();
        auto node = make_node(NodeKind::If, {kw.span.begin, cond->span.end});
        node->children.push_back(std::move(cond));
        auto body = parse_block();
        node->int_attr = static_cast<int64_t>(body.size());
        for (auto& s : body) node->children.push_back(std::move(s));

        if (check(Tok::KwElif)) {
            // Desugar "elif" into a nested If inside the else branch.
            auto nested = parse_elif_chain();
            node->children.push_back(std::move(nested));
        } else if (match(Tok::KwElse)) {
            auto else_body = parse_block();
            for (auto& s : else_body) node->children.push_back(std::move(s));
        }
        if (!node->children.empty()) node->span.end = node->children.back()->span.end;
        return node;
    }

    AstPtr parse_elif_chain() {
        const Token& kw = toks[pos];
        assert(kw.kind == Tok::KwElif);
        advance();
        auto cond = parse_expr();
        auto node = make_node(NodeKind::If, {kw.span.begin, cond->span.end});
        node->children.push_back(std::move(cond));
        auto body = parse_block();
        node->int_attr = static_cast<int64_t>(body.size());
        for (auto& s : body) node->children.push_back(std::move(s));
        if (check(Tok::KwElif)) {
            auto nested = parse_elif_chain();
            node->children.push_back(std::move(nested));
        } else if (match(Tok::KwElse)) {
            auto else_body = parse_block();
            for (auto& s : else_body) node->children.push_back(std::move(s));
        }
        if (!node->children.empty()) node->span.end = node->children.back()->span.end;
        return node;
    }

    AstPtr parse_while() {
        const Token& kw = toks[pos];
        advance();
        auto cond = parse_expr();
        auto node = make_node(NodeKind::While, {kw.span.begin, cond->span.end});
        node->children.push_back(std::move(cond));
        ++loop_depth;
        auto body = parse_block();
        --loop_depth;
        for (auto& s : body) node->children.push_back(std::move(s));
        if (!node->children.empty()) node->span.end = node->children.back()->span.end;
        return node;
    }

    // for <name> in range(...) ':' block
    AstPtr parse_for() {
        const Token& kw = toks[pos];
        advance();
        std::string var = expect_ident("loop variable");
        expect(Tok::KwIn, "'in'");
        reject_unsupported();
        if (!check(Tok::Ident) || peek().text != "range") {
            fail_here("E002", "unsupported construct: only 'for <name> in range(...)' loops are supported");
        }
        const Token& range_tok = toks[pos];
        advance();
        expect(Tok::LParen, "'('");
        std::vector<AstPtr> args;
        if (!check(Tok::RParen)) {
            args.push_back(parse_expr());
            while (match(Tok::Comma)) args.push_back(parse_expr());
        }
        const Token& rparen = expect(Tok::RParen, "')'");
        if (args.empty() || args.size() > 3) {
            fail("E001", "range() takes 1 to 3 arguments", {range_tok.span.begin, rparen.span.end});
        }

        auto node = make_node(NodeKind::ForRange, {kw.span.begin, rparen.span.end});
        node->str_attr = var;
        Span range_span = {range_tok.span.begin, rparen.span.end};
        if (args.size() == 1) {
            auto zero = make_node(NodeKind::IntLit, range_span);
            zero->synthetic = true;
            node->children.push_back(std::move(zero));
            node->children.push_back(std::move(args[0]));
        } else {
            node->children.push_back(std::move(args[0]));
            node->children.push_back(std::move(args[1]));
        }
        if (args.size() == 3) {
            node->children.push_back(std::move(args[2]));
        } else {
            auto one = make_node(NodeKind::IntLit, range_span);
            one->int_attr = 1;
            one->synthetic = true;
            node->children.push_back(std::move(one));
        }

        ++loop_depth;
        auto body = parse_block();
        --loop_depth;
        for (auto& s : body) node->children.push_back(std::move(s));
        if (!node->children.empty()) node->span.end = node->children.back()->span.end;
        return node;
    }

    CliqType parse_type_name() {
        reject_unsupported();
        const Token& t = expect(Tok::Ident, "a type name (int, float, bool)");
        if (t.text == "int") return CliqType::make_int();
        if (t.text == "float") return CliqType::make_float();
        if (t.text == "bool") return CliqType::make_bool();
        fail("E001", "unknown type '" + t.text + "' (expected int, float, or bool)", t.span);
    }

    AstPtr parse_def() {
        const Token& kw = toks[pos];
        advance();
        auto node = make_node(NodeKind::FuncDef, kw.span);
        node->str_attr = expect_ident("function name");
        expect(Tok::LParen, "'('");
        if (!check(Tok::RParen)) {
            do {
                ParamDecl p;
                const Token& name_tok = peek();
                p.name = expect_ident("parameter name");
                p.span = name_tok.span;
                expect(Tok::Colon, "':' (parameter annotations are mandatory)");
                p.type = parse_type_name();
                node->params.push_back(std::move(p));
            } while (match(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        if (match(Tok::Arrow)) node->ret_type = parse_type_name();

        bool saved = in_function;
        in_function = true;
        int saved_loops = loop_depth;
        loop_depth = 0;
        auto body = parse_block();
        loop_depth = saved_loops;
        in_function = saved;

        for (auto& s : body) node->children.push_back(std::move(s));
        if (!node->children.empty()) node->span.end = node->children.back()->span.end;
        return node;
    }

    // Expression grammar, loosest first:
    //   or < and < not < comparison < +,- < *,/,//,% < unary- < ** < call/index
    AstPtr parse_expr() { return parse_or(); }

    AstPtr parse_or() {
        auto lhs = parse_and();
        while (check(Tok::KwOr)) {
            advance();
            auto rhs = parse_and();
            lhs = make_bool_op("or", std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    AstPtr parse_and() {
        auto lhs = parse_not();
        while (check(Tok::KwAnd)) {
            advance();
            auto rhs = parse_not();
            lhs = make_bool_op("and", std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    AstPtr make_bool_op(const char* op, AstPtr l, AstPtr r) {
        auto node = make_node(NodeKind::BoolOp, {l->span.begin, r->span.end});
        node->str_attr = op;
        node->children.push_back(std::move(l));
        node->children.push_back(std::move(r));
        return node;
    }

    AstPtr parse_not() {
        if (check(Tok::KwNot)) {
            const Token& kw = toks[pos];
            advance();
            auto operand = parse_not();
            auto node = make_node(NodeKind::UnaryOp, {kw.span.begin, operand->span.end});
            node->str_attr = "not";
            node->children.push_back(std::move(operand));
            return node;
        }
        return parse_comparison();
    }

    const char* compare_op() {
        switch (peek().kind) {
        case Tok::EqEq: return "==";
        case Tok::NotEq: return "!=";
        case Tok::Lt: return "<";
        case Tok::Le: return "<=";
        case Tok::Gt: return ">";
        case Tok::Ge: return ">=";
        default: return nullptr;
        }
    }

    AstPtr parse_comparison() {
        auto lhs = parse_arith();
        const char* op = compare_op();
        if (!op) return lhs;
        advance();
        auto rhs = parse_arith();
        auto node = make_node(NodeKind::Compare, {lhs->span.begin, rhs->span.end});
        node->str_attr = op;
        node->children.push_back(std::move(lhs));
        node->children.push_back(std::move(rhs));
        if (compare_op()) {
            fail_here("E001", "chained comparisons are not supported");
        }
        return node;
    }

    AstPtr parse_arith() {
        auto lhs = parse_term();
        while (check(Tok::Plus) || check(Tok::Minus)) {
            const char* op = check(Tok::Plus) ? "+" : "-";
            advance();
            auto rhs = parse_term();
            lhs = make_bin_op(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    AstPtr parse_term() {
        auto lhs = parse_factor();
        while (true) {
            const char* op = nullptr;
            switch (peek().kind) {
            case Tok::Star: op = "*"; break;
            case Tok::Slash: op = "/"; break;
            case Tok::DoubleSlash: op = "//"; break;
            case Tok::Percent: op = "%"; break;
            default: break;
            }
            if (!op) return lhs;
            advance();
            auto rhs = parse_factor();
            lhs = make_bin_op(op, std::move(lhs), std::move(rhs));
        }
    }

    AstPtr make_bin_op(const char* op, AstPtr l, AstPtr r) {
        auto node = make_node(NodeKind::BinOp, {l->span.begin, r->span.end});
        node->str_attr = op;
        node->children.push_back(std::move(l));
        node->children.push_back(std::move(r));
        return node;
    }

    AstPtr parse_factor() {
        if (check(Tok::Minus)) {
            const Token& kw = toks[pos];
            advance();
            auto operand = parse_factor();
            auto node = make_node(NodeKind::UnaryOp, {kw.span.begin, operand->span.end});
            node->str_attr = "-";
            node->children.push_back(std::move(operand));
            return node;
        }
        return parse_power();
    }

    AstPtr parse_power() {
        auto base = parse_postfix();
        if (check(Tok::DoubleStar)) {
            advance();
            auto exp = parse_factor(); // right-assoc, unary minus allowed on the right
            return make_bin_op("**", std::move(base), std::move(exp));
        }
        return base;
    }

    AstPtr parse_postfix() {
        reject_unsupported();
        const Token& t = peek();
        switch (t.kind) {
        case Tok::IntLit: {
            advance();
            auto node = make_node(NodeKind::IntLit, t.span);
            node->int_attr = t.int_val;
            return node;
        }
        case Tok::FloatLit: {
            advance();
            auto node = make_node(NodeKind::FloatLit, t.span);
            node->float_attr = t.float_val;
            return node;
        }
        case Tok::KwTrue:
        case Tok::KwFalse: {
            advance();
            auto node = make_node(NodeKind::BoolLit, t.span);
            node->bool_attr = t.kind == Tok::KwTrue;
            return node;
        }
        case Tok::LParen: {
            advance();
            auto inner = parse_expr();
            const Token& close = expect(Tok::RParen, "')'");
            inner->span = {t.span.begin, close.span.end};
            return inner;
        }
        case Tok::LBracket: {
            advance();
            auto node = make_node(NodeKind::ArrayLit, t.span);
            if (check(Tok::RBracket)) {
                fail_here("E001", "array literals must have at least one element");
            }
            node->children.push_back(parse_expr());
            while (match(Tok::Comma)) node->children.push_back(parse_expr());
            const Token& close = expect(Tok::RBracket, "']'");
            node->span.end = close.span.end;
            return node;
        }
        case Tok::Ident: {
            std::string name = expect_ident("an expression");
            if (check(Tok::LParen)) {
                advance();
                auto node = make_node(NodeKind::Call, t.span);
                node->str_attr = name;
                if (!check(Tok::RParen)) {
                    node->children.push_back(parse_expr());
                    while (match(Tok::Comma)) node->children.push_back(parse_expr());
                }
                const Token& close = expect(Tok::RParen, "')'");
                node->span.end = close.span.end;
                return node;
            }
            if (check(Tok::LBracket)) {
                advance();
                auto base = make_node(NodeKind::Name, t.span);
                base->str_attr = name;
                auto node = make_node(NodeKind::Index, t.span);
                node->children.push_back(std::move(base));
                node->children.push_back(parse_expr());
                const Token& close = expect(Tok::RBracket, "']'");
                node->span.end = close.span.end;
                return node;
            }
            auto node = make_node(NodeKind::Name, t.span);
            node->str_attr = name;
            return node;
        }
        default:
            fail_here("E001", "expected an expression");
        }
    }
};

} // namespace

std::optional<ParseResult> parse_module(const SourceModule& src, Diagnostics& diags) {
    auto lexed = lex_module(src, diags);
    if (!lexed) return std::nullopt;
    Parser parser(lexed->tokens, diags);
    try {
        ParseResult result;
        result.root = parser.parse_toplevel();
        result.directives = std::move(lexed->directives);
        return result;
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

AstPtr parse_expression_text(const std::string& text, Diagnostics& diags) {
    auto src = SourceModule::from_text("<expr>", text, diags);
    if (!src) return nullptr;
    auto lexed = lex_module(*src, diags);
    if (!lexed) return nullptr;
    Parser parser(lexed->tokens, diags);
    try {
        auto expr = parser.parse_expr();
        if (!parser.check(Tok::Newline) && !parser.check(Tok::EndOfFile)) {
            diags.error("E001", "trailing input after expression", parser.peek().span);
            return nullptr;
        }
        return expr;
    } catch (const ParseError&) {
        return nullptr;
    }
}

} // namespace cliq
