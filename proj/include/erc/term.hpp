#pragma once

// Terms and equations over the school-algebra signature
//   (≤, ≥, +, ×, ÷, −, fraction, ⊕, ⊖, √, 0, 1)
// together with a concrete text syntax and a printer that round-trips.
//
// Surface syntax:
//   - juxtaposition is multiplication ("2x", "x(y + 1)")
//   - "/" and "÷" are the same node; "n/d" written without spaces between
//     two integer literals is a rational literal and is reduced on parse
//   - "sqrt(...)" and "√(...)" are the same node
//   - a sign in prefix position is ⊕/⊖; "+"/"-" between operands are binary
//   - variables are single ASCII letters
//   - "≥" / ">=" only occur in relations and are rewritten to "≤" with the
//     sides swapped

#include "erc/rational.hpp"

#include <array>
#include <cctype>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace erc {

enum class Op { add, sub, mul, div, pos, neg, sqrt };

constexpr int arity(Op op) noexcept
{
    switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
        return 2;
    case Op::pos:
    case Op::neg:
    case Op::sqrt:
        return 1;
    }
    return 0;
}

struct SymbolInfo {
    std::string_view symbol;
    int arity;
    enum class Kind { predicate, operation, constant } kind;
};

/// The signature in its published order. "fraction" shares Op::div with "÷",
/// and "≥" is eliminated in favour of "≤".
constexpr std::array<SymbolInfo, 12> signature()
{
    using K = SymbolInfo::Kind;
    return {{{"≤", 2, K::predicate},
             {"≥", 2, K::predicate},
             {"+", 2, K::operation},
             {"×", 2, K::operation},
             {"÷", 2, K::operation},
             {"−", 2, K::operation},
             {"fraction", 2, K::operation},
             {"⊕", 1, K::operation},
             {"⊖", 1, K::operation},
             {"√", 1, K::operation},
             {"0", 0, K::constant},
             {"1", 0, K::constant}}};
}

class syntax_error : public std::runtime_error {
public:
    syntax_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position)
    {
    }
    /// 1-based character offset into the input.
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class unknown_symbol_error : public syntax_error {
public:
    unknown_symbol_error(const std::string& symbol, std::size_t position)
        : syntax_error("unknown symbol '" + symbol + "'", position), symbol_(symbol)
    {
    }
    const std::string& symbol() const noexcept { return symbol_; }

private:
    std::string symbol_;
};

class Term {
public:
    enum class Kind { variable, constant, apply };

    static Term variable(char name);
    /// Constants are stored non-negative; a negative value becomes ⊖|q|.
    static Term constant(const Rational& value);
    static Term apply(Op op, std::vector<Term> args);

    Kind kind() const noexcept { return node_->kind; }
    bool is_variable() const noexcept { return kind() == Kind::variable; }
    bool is_constant() const noexcept { return kind() == Kind::constant; }
    bool is_apply() const noexcept { return kind() == Kind::apply; }

    char name() const { return node_->name; }
    const Rational& value() const { return node_->value; }
    Op op() const { return node_->op; }
    std::span<const Term> args() const { return node_->args; }
    const Term& arg(std::size_t i) const { return node_->args.at(i); }

    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind;
        char name = 0;
        Rational value;
        Op op = Op::add;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline Term Term::variable(char name)
{
    if (!((name >= 'a' && name <= 'z') || (name >= 'A' && name <= 'Z')))
        throw std::invalid_argument(std::string("variables are single letters, got '") + name + "'");
    return Term(std::make_shared<const Node>(Node{Kind::variable, name, {}, Op::add, {}}));
}

inline Term Term::constant(const Rational& value)
{
    if (value < 0)
        return apply(Op::neg, {constant(-value)});
    return Term(std::make_shared<const Node>(Node{Kind::constant, 0, value, Op::add, {}}));
}

inline Term Term::apply(Op op, std::vector<Term> args)
{
    if (static_cast<int>(args.size()) != arity(op))
        throw std::invalid_argument("arity mismatch");
    return Term(std::make_shared<const Node>(Node{Kind::apply, 0, {}, op, std::move(args)}));
}

inline bool operator==(const Term& a, const Term& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Term::Kind::variable:
        return a.name() == b.name();
    case Term::Kind::constant:
        return a.value() == b.value();
    case Term::Kind::apply:
        if (a.op() != b.op())
            return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
            if (!(a.args()[i] == b.args()[i]))
                return false;
        return true;
    }
    return false;
}

inline Term operator+(const Term& a, const Term& b) { return Term::apply(Op::add, {a, b}); }
inline Term operator-(const Term& a, const Term& b) { return Term::apply(Op::sub, {a, b}); }
inline Term operator*(const Term& a, const Term& b) { return Term::apply(Op::mul, {a, b}); }
inline Term operator/(const Term& a, const Term& b) { return Term::apply(Op::div, {a, b}); }
inline Term operator-(const Term& a) { return Term::apply(Op::neg, {a}); }
inline Term operator+(const Term& a) { return Term::apply(Op::pos, {a}); }
inline Term sqrt(const Term& a) { return Term::apply(Op::sqrt, {a}); }

struct Equation {
    Term lhs;
    Term rhs;

    Equation swapped() const { return {rhs, lhs}; }
    friend bool operator==(const Equation&, const Equation&) = default;
};

/// An atomic sentence: equality or the order predicate.
struct Relation {
    enum class Kind { eq, leq } kind;
    Term lhs;
    Term rhs;
    friend bool operator==(const Relation&, const Relation&) = default;
};

namespace detail {

struct Token {
    enum class Kind {
        number,   // integer or reduced rational literal
        variable,
        plus,     // "+"
        minus,    // "-" or "−"
        sign_pos, // "⊕"
        sign_neg, // "⊖"
        times,
        divide,
        root,
        lparen,
        rparen,
        eq,
        leq,
        geq,
        end
    } kind;
    std::size_t position; // 1-based character offset
    Rational value;
    char name = 0;
};

inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t column = 0; // characters consumed so far
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
    auto push = [&](Token::Kind k, std::size_t bytes) {
        out.push_back({k, column + 1, {}, 0});
        i += bytes;
        ++column;
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            ++column;
            continue;
        }
        if (is_digit(c)) {
            std::size_t start = i;
            std::size_t pos = column + 1;
            while (i < text.size() && is_digit(text[i]))
                ++i;
            Integer num(std::string(text.substr(start, i - start)));
            Rational value(num);
            // "n/d" with no whitespace is a rational literal unless d = 0
            if (i + 1 < text.size() && text[i] == '/' && is_digit(text[i + 1])) {
                std::size_t dstart = i + 1;
                std::size_t j = dstart;
                while (j < text.size() && is_digit(text[j]))
                    ++j;
                Integer den(std::string(text.substr(dstart, j - dstart)));
                if (den != 0) {
                    value = Rational(num, den);
                    i = j;
                }
            }
            column += i - start;
            out.push_back({Token::Kind::number, pos, value, 0});
            continue;
        }
        if (starts("sqrt")) {
            out.push_back({Token::Kind::root, column + 1, {}, 0});
            i += 4;
            column += 4;
            continue;
        }
        if (is_alpha(c)) {
            out.push_back({Token::Kind::variable, column + 1, {}, c});
            ++i;
            ++column;
            continue;
        }
        switch (c) {
        case '+': push(Token::Kind::plus, 1); continue;
        case '-': push(Token::Kind::minus, 1); continue;
        case '*': push(Token::Kind::times, 1); continue;
        case '/': push(Token::Kind::divide, 1); continue;
        case '(': push(Token::Kind::lparen, 1); continue;
        case ')': push(Token::Kind::rparen, 1); continue;
        case '=': push(Token::Kind::eq, 1); continue;
        case '<':
            if (starts("<=")) {
                out.push_back({Token::Kind::leq, column + 1, {}, 0});
                i += 2;
                column += 2;
                continue;
            }
            break;
        case '>':
            if (starts(">=")) {
                out.push_back({Token::Kind::geq, column + 1, {}, 0});
                i += 2;
                column += 2;
                continue;
            }
            break;
        default:
            break;
        }
        // multi-byte symbols
        if (starts("−")) { push(Token::Kind::minus, 3); continue; }
        if (starts("×")) { push(Token::Kind::times, 2); continue; }
        if (starts("·")) { push(Token::Kind::times, 2); continue; }
        if (starts("÷")) { push(Token::Kind::divide, 2); continue; }
        if (starts("⊕")) { push(Token::Kind::sign_pos, 3); continue; }
        if (starts("⊖")) { push(Token::Kind::sign_neg, 3); continue; }
        if (starts("√")) { push(Token::Kind::root, 3); continue; }
        if (starts("≤")) { push(Token::Kind::leq, 3); continue; }
        if (starts("≥")) { push(Token::Kind::geq, 3); continue; }

        // report the whole UTF-8 code point
        std::size_t len = 1;
        auto lead = static_cast<unsigned char>(c);
        if (lead >= 0xF0)
            len = 4;
        else if (lead >= 0xE0)
            len = 3;
        else if (lead >= 0xC0)
            len = 2;
        throw unknown_symbol_error(std::string(text.substr(i, len)), column + 1);
    }
    out.push_back({Token::Kind::end, column + 1, {}, 0});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    Term expression()
    {
        Term t = product();
        for (;;) {
            if (accept(Token::Kind::plus))
                t = t + product();
            else if (accept(Token::Kind::minus))
                t = t - product();
            else
                return t;
        }
    }

    const Token& peek() const { return tokens_[pos_]; }
    bool accept(Token::Kind k)
    {
        if (peek().kind != k)
            return false;
        ++pos_;
        return true;
    }
    void expect_end()
    {
        if (peek().kind != Token::Kind::end)
            throw syntax_error("unexpected token", peek().position);
    }

private:
    static bool starts_operand(Token::Kind k)
    {
        using K = Token::Kind;
        return k == K::number || k == K::variable || k == K::lparen || k == K::root;
    }

    Term product()
    {
        Term t = unary();
        for (;;) {
            if (accept(Token::Kind::times))
                t = t * unary();
            else if (accept(Token::Kind::divide))
                t = t / unary();
            else if (starts_operand(peek().kind))
                t = t * unary();
            else
                return t;
        }
    }

    Term unary()
    {
        using K = Token::Kind;
        if (accept(K::plus) || accept(K::sign_pos))
            return +unary();
        if (accept(K::minus) || accept(K::sign_neg))
            return -unary();
        if (accept(K::root))
            return sqrt(unary());
        return primary();
    }

    Term primary()
    {
        using K = Token::Kind;
        const Token& tok = peek();
        switch (tok.kind) {
        case K::number:
            ++pos_;
            return Term::constant(tok.value);
        case K::variable:
            ++pos_;
            return Term::variable(tok.name);
        case K::lparen: {
            ++pos_;
            Term inner = expression();
            if (!accept(K::rparen))
                throw syntax_error("expected ')'", peek().position);
            return inner;
        }
        case K::end:
            throw syntax_error("unexpected end of input", tok.position);
        default:
            throw syntax_error("expected an operand", tok.position);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

inline bool blank(std::string_view text)
{
    return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

} // namespace detail

inline Term parse_term(std::string_view text)
{
    if (detail::blank(text))
        throw syntax_error("empty term", 1);
    detail::Parser p(text);
    Term t = p.expression();
    p.expect_end();
    return t;
}

inline Relation parse_relation(std::string_view text)
{
    using K = detail::Token::Kind;
    if (detail::blank(text))
        throw syntax_error("empty relation", 1);
    detail::Parser p(text);
    Term lhs = p.expression();
    Relation::Kind kind;
    bool swap = false;
    if (p.accept(K::eq))
        kind = Relation::Kind::eq;
    else if (p.accept(K::leq))
        kind = Relation::Kind::leq;
    else if (p.accept(K::geq)) {
        kind = Relation::Kind::leq;
        swap = true;
    }
    else
        throw syntax_error("expected '=', '≤' or '≥'", p.peek().position);
    Term rhs = p.expression();
    p.expect_end();
    if (swap)
        return {kind, rhs, lhs};
    return {kind, lhs, rhs};
}

inline Equation parse_equation(std::string_view text)
{
    Relation r = parse_relation(text);
    if (r.kind != Relation::Kind::eq)
        throw syntax_error("expected an equation", 1);
    return {r.lhs, r.rhs};
}

namespace detail {

// 0: sum, 1: product, 2: prefix or rational literal, 3: atom
inline int level(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::variable:
        return 3;
    case Term::Kind::constant:
        return is_integer(t.value()) ? 3 : 2;
    case Term::Kind::apply:
        switch (t.op()) {
        case Op::add:
        case Op::sub:
            return 0;
        case Op::mul:
        case Op::div:
            return 1;
        default:
            return 2;
        }
    }
    return 3;
}

inline bool is_fraction_literal(const Term& t) { return t.is_constant() && !is_integer(t.value()); }

std::string render(const Term& t);

inline std::string wrapped(const Term& t, bool wrap)
{
    return wrap ? "(" + render(t) + ")" : render(t);
}

inline std::string render(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::variable:
        return std::string(1, t.name());
    case Term::Kind::constant:
        return to_string(t.value());
    case Term::Kind::apply:
        break;
    }
    const Term& a = t.arg(0);
    switch (t.op()) {
    case Op::add:
        return render(a) + " + " + wrapped(t.arg(1), level(t.arg(1)) == 0);
    case Op::sub:
        return render(a) + " - " + wrapped(t.arg(1), level(t.arg(1)) == 0);
    case Op::mul: {
        const Term& b = t.arg(1);
        std::string l = wrapped(a, level(a) == 0 || is_fraction_literal(a));
        std::string r = wrapped(b, level(b) <= 1 || is_fraction_literal(b));
        char last = l.back();
        char first = r.front();
        bool left_ok = !(a.is_apply() && a.op() == Op::div) &&
                       (std::isalnum(static_cast<unsigned char>(last)) || last == ')');
        bool right_ok = std::isalpha(static_cast<unsigned char>(first)) || first == '(' ||
                        r.starts_with("√");
        return l + (left_ok && right_ok ? "" : " × ") + r;
    }
    case Op::div: {
        const Term& b = t.arg(1);
        return wrapped(a, level(a) == 0 || is_fraction_literal(a)) + " ÷ " +
               wrapped(b, level(b) <= 1 || is_fraction_literal(b));
    }
    case Op::pos:
        return "+" + wrapped(a, level(a) <= 1 || is_fraction_literal(a));
    case Op::neg:
        return "-" + wrapped(a, level(a) <= 1 || is_fraction_literal(a));
    case Op::sqrt:
        return "√(" + render(a) + ")";
    }
    return {};
}

inline std::string_view op_symbol(Op op)
{
    switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "×";
    case Op::div: return "÷";
    case Op::pos: return "⊕";
    case Op::neg: return "⊖";
    case Op::sqrt: return "√";
    }
    return "?";
}

} // namespace detail

inline std::string print_term(const Term& t) { return detail::render(t); }

inline std::string print_equation(const Equation& e)
{
    return print_term(e.lhs) + " = " + print_term(e.rhs);
}

/// Prefix dump, e.g. "(+ (× 2 x) 3)".
inline std::string to_sexpr(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::variable:
        return std::string(1, t.name());
    case Term::Kind::constant:
        return to_string(t.value());
    case Term::Kind::apply:
        break;
    }
    std::string out = "(" + std::string(detail::op_symbol(t.op()));
    for (const Term& a : t.args())
        out += " " + to_sexpr(a);
    return out + ")";
}

} // namespace erc
