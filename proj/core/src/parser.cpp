#include "cascade/parser.hpp"

#include <charconv>
#include <map>
#include <string>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/render.hpp"

namespace cascade {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    Name,
    Int,
    Real,
    Str,
    KwIf,
    KwReturn,
    KwAnd,
    KwOr,
    KwNot,
    KwIn,
    KwTrue,
    KwFalse,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    Assign,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Minus,
    Newline,
    DocBlock,     // raw text between triple quotes
    CommentLine,  // full-line comment (label candidate)
    End,
};

struct Token {
    Tok kind;
    std::string text;  // Name / Str (decoded) / DocBlock (raw) / CommentLine
    long long int_value = 0;
    double real_value = 0.0;
    int line = 1;
    int col = 1;
};

const char* token_label(Tok kind) {
    switch (kind) {
        case Tok::Name: return "a name";
        case Tok::Int:
        case Tok::Real: return "a number";
        case Tok::Str: return "a string";
        case Tok::KwIf: return "'if'";
        case Tok::KwReturn: return "'return'";
        case Tok::KwAnd: return "'and'";
        case Tok::KwOr: return "'or'";
        case Tok::KwNot: return "'not'";
        case Tok::KwIn: return "'in'";
        case Tok::KwTrue: return "'True'";
        case Tok::KwFalse: return "'False'";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::EqEq: return "'=='";
        case Tok::Ne: return "'!='";
        case Tok::Assign: return "'='";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Colon: return "':'";
        case Tok::Minus: return "'-'";
        case Tok::Newline: return "end of line";
        case Tok::DocBlock: return "a validation block";
        case Tok::CommentLine: return "a comment";
        default: return "end of input";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == '\n') {
                end_line();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
                continue;
            }
            if (c == '#') {
                lex_comment();
                continue;
            }
            if (c == '"' && i_ + 2 < src_.size() && src_[i_ + 1] == '"' && src_[i_ + 2] == '"') {
                lex_doc_block();
                continue;
            }
            if (c == '"' || c == '\'') {
                lex_string(c);
                continue;
            }
            if (is_digit(c) || (c == '.' && i_ + 1 < src_.size() && is_digit(src_[i_ + 1]))) {
                lex_number();
                continue;
            }
            if (is_name_start(c)) {
                lex_name();
                continue;
            }
            lex_operator(c);
        }
        if (line_had_code_) push_simple(Tok::Newline);
        tokens_.push_back({Tok::End, "", 0, 0.0, line_, col_});
        return std::move(tokens_);
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_name_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_name_char(char c) { return is_name_start(c) || is_digit(c); }

    [[noreturn]] void fail(const std::string& message, SyntaxErrorKind kind = SyntaxErrorKind::Generic) {
        throw SyntaxError(line_, col_, message, kind);
    }

    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void end_line() {
        if (depth_ == 0 && line_had_code_) push_simple(Tok::Newline);
        line_had_code_ = false;
        advance();
    }

    void push(Token t) {
        tokens_.push_back(std::move(t));
        line_had_code_ = true;
    }

    void push_simple(Tok kind) { push({kind, "", 0, 0.0, line_, col_}); }

    void lex_comment() {
        int start_line = line_;
        bool full_line = !line_had_code_;
        std::size_t begin = i_ + 1;
        while (i_ < src_.size() && src_[i_] != '\n') advance();
        if (full_line && depth_ == 0) {
            std::string text(src_.substr(begin, i_ - begin));
            std::size_t from = text.find_first_not_of(" \t");
            std::size_t to = text.find_last_not_of(" \t\r");
            text = from == std::string::npos ? "" : text.substr(from, to - from + 1);
            tokens_.push_back({Tok::CommentLine, std::move(text), 0, 0.0, start_line, 1});
            // deliberately not code: a comment-only line is not a logical line
        }
    }

    void lex_doc_block() {
        int start_line = line_;
        int start_col = col_;
        if (depth_ != 0) fail("validation blocks cannot appear inside brackets");
        std::size_t begin = i_ + 3;
        std::size_t close = src_.find("\"\"\"", begin);
        if (close == std::string_view::npos)
            throw SyntaxError(start_line, start_col, "unterminated validation block");
        std::string content(src_.substr(begin, close - begin));
        while (i_ < close + 3) advance();
        push({Tok::DocBlock, std::move(content), 0, 0.0, start_line, start_col});
    }

    void lex_string(char quote) {
        int start_line = line_;
        int start_col = col_;
        advance();  // opening quote
        std::string out;
        while (true) {
            if (i_ >= src_.size() || src_[i_] == '\n')
                throw SyntaxError(start_line, start_col, "unterminated string literal");
            char c = src_[i_];
            if (c == quote) {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (i_ >= src_.size()) throw SyntaxError(start_line, start_col, "unterminated string literal");
                char esc = src_[i_];
                switch (esc) {
                    case '\\': out.push_back('\\'); break;
                    case '\'': out.push_back('\''); break;
                    case '"': out.push_back('"'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    default: fail(std::string("unsupported escape sequence '\\") + esc + "'");
                }
                advance();
                continue;
            }
            out.push_back(c);
            advance();
        }
        push({Tok::Str, std::move(out), 0, 0.0, start_line, start_col});
    }

    void lex_number() {
        int start_line = line_;
        int start_col = col_;
        std::size_t begin = i_;
        bool is_real = false;
        while (i_ < src_.size() && is_digit(src_[i_])) advance();
        if (i_ < src_.size() && src_[i_] == '.') {
            is_real = true;
            advance();
            while (i_ < src_.size() && is_digit(src_[i_])) advance();
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            is_real = true;
            advance();
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) advance();
            if (i_ >= src_.size() || !is_digit(src_[i_]))
                throw SyntaxError(start_line, start_col, "malformed numeric literal");
            while (i_ < src_.size() && is_digit(src_[i_])) advance();
        }
        std::string_view text = src_.substr(begin, i_ - begin);
        Token tok{is_real ? Tok::Real : Tok::Int, std::string(text), 0, 0.0, start_line, start_col};
        if (is_real) {
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), tok.real_value);
            if (ec != std::errc() || p != text.data() + text.size())
                throw SyntaxError(start_line, start_col, "malformed numeric literal");
        } else {
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), tok.int_value);
            if (ec == std::errc::result_out_of_range)
                throw SyntaxError(start_line, start_col, "integer literal out of range");
            if (ec != std::errc() || p != text.data() + text.size())
                throw SyntaxError(start_line, start_col, "malformed numeric literal");
        }
        push(std::move(tok));
    }

    void lex_name() {
        int start_line = line_;
        int start_col = col_;
        std::size_t begin = i_;
        while (i_ < src_.size() && is_name_char(src_[i_])) advance();
        std::string_view text = src_.substr(begin, i_ - begin);
        static const std::map<std::string_view, Tok> keywords = {
            {"if", Tok::KwIf},   {"return", Tok::KwReturn}, {"and", Tok::KwAnd},
            {"or", Tok::KwOr},   {"not", Tok::KwNot},       {"in", Tok::KwIn},
            {"True", Tok::KwTrue}, {"False", Tok::KwFalse},
        };
        auto it = keywords.find(text);
        push({it == keywords.end() ? Tok::Name : it->second, std::string(text), 0, 0.0, start_line,
              start_col});
    }

    void lex_operator(char c) {
        int start_line = line_;
        int start_col = col_;
        auto two = [&](char second) {
            return i_ + 1 < src_.size() && src_[i_ + 1] == second;
        };
        Tok kind;
        int width = 1;
        switch (c) {
            case '<': kind = two('=') ? (width = 2, Tok::Le) : Tok::Lt; break;
            case '>': kind = two('=') ? (width = 2, Tok::Ge) : Tok::Gt; break;
            case '=': kind = two('=') ? (width = 2, Tok::EqEq) : Tok::Assign; break;
            case '!':
                if (!two('=')) fail("unexpected character '!'");
                kind = Tok::Ne;
                width = 2;
                break;
            case '(': kind = Tok::LParen; ++depth_; break;
            case ')': kind = Tok::RParen; if (depth_ > 0) --depth_; break;
            case '{': kind = Tok::LBrace; ++depth_; break;
            case '}': kind = Tok::RBrace; if (depth_ > 0) --depth_; break;
            case ',': kind = Tok::Comma; break;
            case ':': kind = Tok::Colon; break;
            case '-': kind = Tok::Minus; break;
            case '@':
                fail("meta-predicates must appear inside a triple-quoted validation block");
            default:
                fail(std::string("unexpected character '") + c + "'");
        }
        for (int k = 0; k < width; ++k) advance();
        push({kind, "", 0, 0.0, start_line, start_col});
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
    int depth_ = 0;
    bool line_had_code_ = false;
    std::vector<Token> tokens_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

std::vector<MetaPredicate> parse_validation_block(const std::string& raw, int block_line) {
    std::vector<MetaPredicate> metas;
    int line = block_line;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t eol = raw.find('\n', pos);
        std::string text = raw.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? raw.size() + 1 : eol + 1;

        std::size_t from = text.find_first_not_of(" \t\r");
        if (from == std::string::npos) {
            ++line;
            continue;
        }
        std::size_t to = text.find_last_not_of(" \t\r");
        text = text.substr(from, to - from + 1);

        if (text[0] != '@')
            throw SyntaxError(line, static_cast<int>(from) + 1,
                              "validation blocks may only contain @dimension(value) lines");
        std::size_t open = text.find('(');
        if (open == std::string::npos || text.back() != ')')
            throw SyntaxError(line, static_cast<int>(from) + 1,
                              "meta-predicates must have the form @dimension(value)");
        std::string name = text.substr(1, open - 1);
        auto dim = dimension_from_name(name);
        if (!dim)
            throw SyntaxError(line, static_cast<int>(from) + 1, "unknown directive @" + name,
                              SyntaxErrorKind::UnknownDirective);
        std::string value = text.substr(open + 1, text.size() - open - 2);
        std::size_t vf = value.find_first_not_of(" \t");
        std::size_t vt = value.find_last_not_of(" \t");
        value = vf == std::string::npos ? "" : value.substr(vf, vt - vf + 1);
        if (value.empty())
            throw SyntaxError(line, static_cast<int>(from) + 1,
                              "meta-predicate @" + name + " has an empty value");
        MetaPredicate meta;
        meta.dimension = *dim;
        meta.source_text = value;
        meta.value = normalize_label(value);
        meta.line = line;
        metas.push_back(std::move(meta));
        ++line;
    }
    return metas;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens, bool with_constants)
        : tokens_(std::move(tokens)), set_refs_allowed_(with_constants) {}

    Script parse_script() {
        bool saw_final = false;
        while (true) {
            consume_comments(true);
            const Token& tok = cur();
            if (tok.kind == Tok::End) break;
            if (tok.kind == Tok::Name && peek().kind == Tok::Assign) {
                require_top_level(tok);
                parse_constant_def();
                clear_comment();
                continue;
            }
            if (tok.kind == Tok::DocBlock || tok.kind == Tok::KwIf) {
                require_top_level(tok);
                parse_statement();
                continue;
            }
            if (tok.kind == Tok::KwReturn) {
                if (tok.col != 1)
                    throw SyntaxError(tok.line, tok.col, "each statement has exactly one action");
                script_.final_action = parse_return_line();
                saw_final = true;
                consume_comments(true);
                if (cur().kind != Tok::End)
                    throw SyntaxError(cur().line, cur().col,
                                      "unexpected content after the final return");
                break;
            }
            throw SyntaxError(tok.line, tok.col,
                              std::string("expected a statement or return, found ") +
                                  token_label(tok.kind));
        }
        if (!saw_final)
            throw SyntaxError(cur().line, cur().col,
                              "script must end with a top-level return True or return False",
                              SyntaxErrorKind::MissingFinalAction);
        check_name_collisions();
        finalize_script(script_);
        return std::move(script_);
    }

    ExprPtr parse_expression_only() {
        ExprPtr expr = parse_or();
        if (cur().kind == Tok::Newline) advance();
        if (cur().kind != Tok::End)
            throw SyntaxError(cur().line, cur().col,
                              std::string("unexpected ") + token_label(cur().kind) +
                                  " after the expression");
        return expr;
    }

private:
    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek() const { return tokens_[std::min(pos_ + 1, tokens_.size() - 1)]; }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }

    [[noreturn]] void fail_at(const Token& tok, const std::string& message,
                              SyntaxErrorKind kind = SyntaxErrorKind::Generic) {
        throw SyntaxError(tok.line, tok.col, message, kind);
    }

    void expect(Tok kind, const char* what) {
        if (cur().kind != kind)
            fail_at(cur(), std::string("expected ") + what + ", found " + token_label(cur().kind));
        advance();
    }

    void require_top_level(const Token& tok) {
        if (tok.col == 1) return;
        if (tok.kind == Tok::KwIf)
            fail_at(tok, "nested conditionals are not supported; cascades hold one action per "
                         "statement", SyntaxErrorKind::NestedConditional);
        fail_at(tok, "statements must start at column 1");
    }

    // Tracks contiguous full-line comments so the nearest preceding block can
    // label the following statement.
    void consume_comments(bool keep) {
        while (cur().kind == Tok::CommentLine) {
            if (keep) {
                if (!comment_text_.empty() && cur().line == comment_end_line_ + 1) {
                    if (!cur().text.empty()) {
                        if (!comment_text_.empty()) comment_text_ += " ";
                        comment_text_ += cur().text;
                    }
                } else {
                    comment_text_ = cur().text;
                }
                comment_end_line_ = cur().line;
            }
            advance();
        }
    }

    void clear_comment() {
        comment_text_.clear();
        comment_end_line_ = -1;
    }

    std::string take_label(int statement_line) {
        std::string label;
        if (comment_end_line_ == statement_line - 1) label = comment_text_;
        clear_comment();
        return label;
    }

    void parse_constant_def() {
        if (!script_.statements.empty())
            fail_at(cur(), "set constants must be declared before the first statement");
        Token name = cur();
        advance();  // name
        advance();  // '='
        ExprPtr literal = parse_set_literal();
        expect(Tok::Newline, "end of line after the set constant");
        for (const auto& [existing, _] : script_.constants)
            if (existing == name.text)
                fail_at(name, "set constant " + name.text + " is declared more than once");
        script_.constants.emplace_back(name.text, std::move(literal));
    }

    bool parse_return_line() {
        advance();  // 'return'
        bool value;
        if (cur().kind == Tok::KwTrue) {
            value = true;
        } else if (cur().kind == Tok::KwFalse) {
            value = false;
        } else {
            fail_at(cur(), "actions must be `return True` or `return False`");
        }
        advance();
        expect(Tok::Newline, "end of line after the action");
        return value;
    }

    void parse_statement() {
        Statement stmt;
        const Token& first = cur();
        stmt.line_first = first.line;
        stmt.label = take_label(first.line);

        if (cur().kind == Tok::DocBlock) {
            stmt.meta_predicates = parse_validation_block(cur().text, cur().line);
            advance();
            expect(Tok::Newline, "end of line after the validation block");
            consume_comments(false);
            if (cur().kind != Tok::KwIf)
                fail_at(cur(), "expected an if statement after the validation block");
            if (cur().col != 1) require_top_level(cur());
        }

        const Token& if_tok = cur();
        stmt.line_if = if_tok.line;
        int if_col = if_tok.col;
        advance();
        stmt.predicate = parse_or();
        expect(Tok::Colon, "':' after the predicate");
        expect(Tok::Newline, "end of line after ':'");

        if (cur().kind != Tok::KwReturn)
            fail_at(cur(), "expected an indented return under the if");
        if (cur().col <= if_col)
            fail_at(cur(), "the action must be indented more than its if");
        stmt.line_last = cur().line;
        stmt.action = parse_return_line();

        script_.statements.push_back(std::move(stmt));
    }

    // predicate := or_expr; precedence not > and > or
    ExprPtr parse_or() {
        ExprPtr left = parse_and();
        if (cur().kind != Tok::KwOr) return left;
        std::vector<ExprPtr> children{std::move(left)};
        while (cur().kind == Tok::KwOr) {
            advance();
            children.push_back(parse_and());
        }
        return make_or(std::move(children));
    }

    ExprPtr parse_and() {
        ExprPtr left = parse_not();
        if (cur().kind != Tok::KwAnd) return left;
        std::vector<ExprPtr> children{std::move(left)};
        while (cur().kind == Tok::KwAnd) {
            advance();
            children.push_back(parse_not());
        }
        return make_and(std::move(children));
    }

    ExprPtr parse_not() {
        if (cur().kind == Tok::KwNot && peek().kind != Tok::KwIn) {
            advance();
            return make_not(parse_not());
        }
        return parse_comparison();
    }

    static bool is_atom(const ExprPtr& e) {
        return std::holds_alternative<Expr::Var>(e->node) ||
               std::holds_alternative<Expr::Const>(e->node);
    }

    static bool is_boolean_node(const ExprPtr& e) {
        return std::holds_alternative<Expr::Or>(e->node) ||
               std::holds_alternative<Expr::And>(e->node) ||
               std::holds_alternative<Expr::Not>(e->node) ||
               std::holds_alternative<Expr::Compare>(e->node) ||
               std::holds_alternative<Expr::Membership>(e->node);
    }

    static std::optional<CompareOp> compare_op_of(Tok kind) {
        switch (kind) {
            case Tok::Lt: return CompareOp::Less;
            case Tok::Le: return CompareOp::LessEq;
            case Tok::Gt: return CompareOp::Greater;
            case Tok::Ge: return CompareOp::GreaterEq;
            case Tok::EqEq: return CompareOp::Eq;
            case Tok::Ne: return CompareOp::Ne;
            default: return std::nullopt;
        }
    }

    ExprPtr parse_comparison() {
        const Token& lhs_tok = cur();
        ExprPtr lhs = parse_operand();

        bool negated_membership = cur().kind == Tok::KwNot && peek().kind == Tok::KwIn;
        if (negated_membership || cur().kind == Tok::KwIn) {
            if (!is_atom(lhs))
                fail_at(lhs_tok, "the left side of a membership test must be a variable or "
                                 "constant");
            advance();
            if (negated_membership) advance();
            ExprPtr set = parse_set_expr();
            return make_membership(std::move(lhs), std::move(set), negated_membership);
        }

        if (auto op = compare_op_of(cur().kind)) {
            if (!is_atom(lhs))
                fail_at(lhs_tok, "comparison operands must be variables or constants");
            std::vector<ExprPtr> operands{std::move(lhs)};
            std::vector<CompareOp> ops;
            while (auto next_op = compare_op_of(cur().kind)) {
                ops.push_back(*next_op);
                advance();
                const Token& operand_tok = cur();
                ExprPtr operand = parse_operand();
                if (!is_atom(operand))
                    fail_at(operand_tok, "comparison operands must be variables or constants");
                operands.push_back(std::move(operand));
            }
            return make_compare(std::move(operands), std::move(ops));
        }

        if (is_boolean_node(lhs)) return lhs;
        fail_at(lhs_tok, "expected a comparison or membership test");
    }

    ExprPtr parse_operand() {
        const Token& tok = cur();
        switch (tok.kind) {
            case Tok::Name: {
                ExprPtr v = make_var(tok.text);
                advance();
                return v;
            }
            case Tok::Int: {
                ExprPtr c = make_const(Value::integer(tok.int_value));
                advance();
                return c;
            }
            case Tok::Real: {
                ExprPtr c = make_const(Value::real(tok.real_value));
                advance();
                return c;
            }
            case Tok::Str: {
                ExprPtr c = make_const(Value::text(tok.text));
                advance();
                return c;
            }
            case Tok::KwTrue:
                advance();
                return make_const(Value::boolean(true));
            case Tok::KwFalse:
                advance();
                return make_const(Value::boolean(false));
            case Tok::Minus:
                return make_const(parse_negative_number());
            case Tok::LParen: {
                advance();
                ExprPtr inner = parse_or();
                expect(Tok::RParen, "')'");
                return inner;
            }
            default:
                fail_at(tok, std::string("expected a value, variable or parenthesized "
                                         "expression, found ") +
                                 token_label(tok.kind));
        }
    }

    Value parse_negative_number() {
        advance();  // '-'
        const Token& tok = cur();
        if (tok.kind == Tok::Int) {
            advance();
            return Value::integer(-tok.int_value);
        }
        if (tok.kind == Tok::Real) {
            advance();
            return Value::real(-tok.real_value);
        }
        fail_at(tok, "expected a number after '-'");
    }

    ExprPtr parse_set_expr() {
        if (cur().kind == Tok::LBrace) return parse_set_literal();
        if (cur().kind == Tok::Name) {
            const Token& tok = cur();
            if (!set_refs_allowed_ || !declared_constant(tok.text))
                fail_at(tok, "undefined set constant " + tok.text,
                        SyntaxErrorKind::UndefinedSetRef);
            advance();
            return make_set_ref(tok.text);
        }
        fail_at(cur(), "expected a set literal or set constant");
    }

    bool declared_constant(const std::string& name) const {
        for (const auto& [existing, _] : script_.constants)
            if (existing == name) return true;
        return false;
    }

    ExprPtr parse_set_literal() {
        const Token& brace = cur();
        expect(Tok::LBrace, "'{'");
        std::vector<Value> elements;
        while (cur().kind != Tok::RBrace) {
            elements.push_back(parse_set_element());
            if (cur().kind == Tok::Comma) {
                advance();
                continue;
            }
            if (cur().kind != Tok::RBrace)
                fail_at(cur(), "expected ',' or '}' in the set literal");
        }
        if (elements.empty()) fail_at(brace, "set literals must not be empty");
        advance();  // '}'
        return make_set_literal(std::move(elements));
    }

    Value parse_set_element() {
        const Token& tok = cur();
        switch (tok.kind) {
            case Tok::Str: {
                Value v = Value::text(tok.text);
                advance();
                return v;
            }
            case Tok::Int: {
                Value v = Value::integer(tok.int_value);
                advance();
                return v;
            }
            case Tok::Real: {
                Value v = Value::real(tok.real_value);
                advance();
                return v;
            }
            case Tok::KwTrue:
                advance();
                return Value::boolean(true);
            case Tok::KwFalse:
                advance();
                return Value::boolean(false);
            case Tok::Minus:
                return parse_negative_number();
            case Tok::Name:
                fail_at(tok, "set elements must be constants");
            default:
                fail_at(tok, std::string("expected a constant in the set literal, found ") +
                                 token_label(tok.kind));
        }
    }

    void check_name_collisions() const {
        for (const Statement& stmt : script_.statements) {
            for (const std::string& var : extract_variables(stmt.predicate)) {
                if (declared_constant(var))
                    throw SyntaxError(stmt.line_if, 1,
                                      "name " + var +
                                          " is used both as a set constant and as a variable");
            }
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    bool set_refs_allowed_;
    Script script_;
    std::string comment_text_;
    int comment_end_line_ = -1;
};

}  // namespace

Script parse_script(std::string_view source) {
    Parser parser(Lexer(source).run(), /*with_constants=*/true);
    return parser.parse_script();
}

ExprPtr parse_predicate(std::string_view text) {
    Parser parser(Lexer(text).run(), /*with_constants=*/false);
    return parser.parse_expression_only();
}

}  // namespace cascade
