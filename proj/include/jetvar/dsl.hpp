#pragma once

#include "jetvar/jet_form.hpp"

#include <cctype>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Parse error with a character position in the input.
struct DslError : std::runtime_error {
    std::size_t position;
    DslError(std::size_t pos, const std::string& what)
        : std::runtime_error("parse error at " + std::to_string(pos + 1) + ": " + what),
          position(pos) {}
};

namespace dsl {

enum class TokKind { number, ident, plus, minus, star, caret, dstar, lparen, rparen, comma, end };

struct Token {
    TokKind kind;
    std::size_t pos;
    std::string text;     // ident
    Rational value;       // number
};

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto peek_digit = [&](std::size_t j) { return j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])); };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (peek_digit(j)) ++j;
            std::string num = src.substr(i, j - i);
            // a rational literal p/q
            std::size_t k = j;
            while (k < src.size() && std::isspace(static_cast<unsigned char>(src[k]))) ++k;
            if (k < src.size() && src[k] == '/') {
                std::size_t l = k + 1;
                while (l < src.size() && std::isspace(static_cast<unsigned char>(src[l]))) ++l;
                if (!peek_digit(l)) throw DslError(k, "expected denominator digits after '/'");
                std::size_t e = l;
                while (peek_digit(e)) ++e;
                std::string den = src.substr(l, e - l);
                if (mpz_class(den) == 0) throw DslError(l, "zero denominator in rational literal");
                out.push_back({TokKind::number, start, "", Rational(mpq_class(num + "/" + den))});
                i = e;
                continue;
            }
            out.push_back({TokKind::number, start, "", Rational(mpq_class(num))});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({TokKind::ident, start, src.substr(i, j - i), Rational(0)});
            i = j;
            continue;
        }
        switch (c) {
            case '+': out.push_back({TokKind::plus, start, "", Rational(0)}); ++i; break;
            case '-': out.push_back({TokKind::minus, start, "", Rational(0)}); ++i; break;
            case '*':
                if (i + 1 < src.size() && src[i + 1] == '*') {
                    out.push_back({TokKind::dstar, start, "", Rational(0)});
                    i += 2;
                } else {
                    out.push_back({TokKind::star, start, "", Rational(0)});
                    ++i;
                }
                break;
            case '^': out.push_back({TokKind::caret, start, "", Rational(0)}); ++i; break;
            case '(': out.push_back({TokKind::lparen, start, "", Rational(0)}); ++i; break;
            case ')': out.push_back({TokKind::rparen, start, "", Rational(0)}); ++i; break;
            case ',': out.push_back({TokKind::comma, start, "", Rational(0)}); ++i; break;
            default: throw DslError(start, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({TokKind::end, src.size(), "", Rational(0)});
    return out;
}

// expression tree; kept explicit so position-annotated evaluation errors can
// point at the offending node
struct Expression {
    enum class Kind { number, variable, dx, theta, add, sub, mul, wedge, pow, neg, total_d };
    Kind kind;
    std::size_t pos = 0;
    Rational value;                 // number
    std::string name;               // variable / covector argument
    std::uint32_t index = 0;        // total_d direction, pow exponent
    std::vector<std::unique_ptr<Expression>> children;
};

using ExpressionPtr = std::unique_ptr<Expression>;

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src), toks_(tokenize(src)) {}

    ExpressionPtr parse() {
        auto e = parse_expr();
        if (cur().kind != TokKind::end) throw DslError(cur().pos, "trailing input");
        return e;
    }

private:
    const Token& cur() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
    Token take() {
        const Token& t = cur();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(TokKind k) {
        if (cur().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExpressionPtr make(Expression::Kind k, std::size_t pos) {
        auto e = std::make_unique<Expression>();
        e->kind = k;
        e->pos = pos;
        return e;
    }

    ExpressionPtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            std::size_t p = cur().pos;
            if (accept(TokKind::plus)) {
                auto e = make(Expression::Kind::add, p);
                e->children.push_back(std::move(lhs));
                e->children.push_back(parse_term());
                lhs = std::move(e);
            } else if (accept(TokKind::minus)) {
                auto e = make(Expression::Kind::sub, p);
                e->children.push_back(std::move(lhs));
                e->children.push_back(parse_term());
                lhs = std::move(e);
            } else {
                return lhs;
            }
        }
    }

    ExpressionPtr parse_term() {
        auto lhs = parse_factor();
        for (;;) {
            std::size_t p = cur().pos;
            if (accept(TokKind::star)) {
                auto e = make(Expression::Kind::mul, p);
                e->children.push_back(std::move(lhs));
                e->children.push_back(parse_factor());
                lhs = std::move(e);
            } else if (accept(TokKind::caret)) {
                auto e = make(Expression::Kind::wedge, p);
                e->children.push_back(std::move(lhs));
                e->children.push_back(parse_factor());
                lhs = std::move(e);
            } else if (cur().kind == TokKind::ident || cur().kind == TokKind::number ||
                       cur().kind == TokKind::lparen) {
                // juxtaposition multiplies, so printed forms reparse
                auto e = make(Expression::Kind::mul, p);
                e->children.push_back(std::move(lhs));
                e->children.push_back(parse_factor());
                lhs = std::move(e);
            } else {
                return lhs;
            }
        }
    }

    ExpressionPtr parse_factor() {
        std::size_t p = cur().pos;
        if (accept(TokKind::minus)) {
            auto e = make(Expression::Kind::neg, p);
            e->children.push_back(parse_factor());
            return e;
        }
        auto base = parse_primary();
        if (cur().kind == TokKind::dstar) {
            std::size_t dp = take().pos;
            if (cur().kind != TokKind::number || !cur().value.is_integer() ||
                cur().value.sign() < 0)
                throw DslError(cur().pos, "'**' needs a nonnegative integer exponent");
            auto e = make(Expression::Kind::pow, dp);
            e->index = static_cast<std::uint32_t>(take().value.numerator().get_ui());
            e->children.push_back(std::move(base));
            return e;
        }
        return base;
    }

    ExpressionPtr parse_primary() {
        const Token t = take();
        switch (t.kind) {
            case TokKind::number: {
                auto e = make(Expression::Kind::number, t.pos);
                e->value = t.value;
                return e;
            }
            case TokKind::lparen: {
                auto e = parse_expr();
                if (!accept(TokKind::rparen)) throw DslError(cur().pos, "expected ')'");
                return e;
            }
            case TokKind::ident: {
                if ((t.text == "d" || t.text == "th" || t.text == "D") &&
                    cur().kind == TokKind::lparen) {
                    take();  // '('
                    if (t.text == "D") {
                        auto e = make(Expression::Kind::total_d, t.pos);
                        e->children.push_back(parse_expr());
                        if (!accept(TokKind::comma))
                            throw DslError(cur().pos, "D(expr, i) needs a direction");
                        if (cur().kind != TokKind::number || !cur().value.is_integer())
                            throw DslError(cur().pos, "D(expr, i): integer direction expected");
                        e->index = static_cast<std::uint32_t>(take().value.numerator().get_ui());
                        if (!accept(TokKind::rparen)) throw DslError(cur().pos, "expected ')'");
                        return e;
                    }
                    if (cur().kind != TokKind::ident)
                        throw DslError(cur().pos, t.text + "(...) expects a variable name");
                    Token arg = take();
                    if (!accept(TokKind::rparen)) throw DslError(cur().pos, "expected ')'");
                    auto e = make(t.text == "d" ? Expression::Kind::dx : Expression::Kind::theta,
                                  t.pos);
                    e->name = arg.text;
                    e->pos = arg.pos;
                    return e;
                }
                auto e = make(Expression::Kind::variable, t.pos);
                e->name = t.text;
                return e;
            }
            default: throw DslError(t.pos, "expected a value");
        }
    }

    std::string src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// variable-name resolution against a jet context: x<i>, or a fiber family
// name possibly followed by _<sorted digit multi-index>
struct ResolvedVar {
    bool is_base = false;
    std::uint32_t base_index = 0;
    std::uint32_t fiber = 0;
    MultiIndex J;
};

inline ResolvedVar resolve_variable(const JetContextPtr& ctx, const std::string& name,
                                    std::size_t pos) {
    for (std::uint32_t i = 0; i < ctx->base_dim(); ++i)
        if (sym_name(ctx->base_symbol(i)) == name) return {true, i, 0, {}};
    // longest fiber-name prefix match, optional jet suffix
    for (std::uint32_t a = 0; a < ctx->fiber_dim(); ++a) {
        const std::string& f = ctx->fiber_name(a);
        if (name == f) return {false, 0, a, {}};
        if (name.size() > f.size() + 1 && name.compare(0, f.size(), f) == 0 &&
            name[f.size()] == '_') {
            std::string digits = name.substr(f.size() + 1);
            MultiIndex j;
            for (char c : digits) {
                if (!std::isdigit(static_cast<unsigned char>(c))) continue;
                std::uint32_t d = static_cast<std::uint32_t>(c - '0');
                if (d < 1 || d > ctx->base_dim())
                    throw DslError(pos, "jet index out of range in '" + name + "'");
                j.push_back(d - 1);
            }
            if (digits.empty()) throw DslError(pos, "empty jet multi-index in '" + name + "'");
            std::sort(j.begin(), j.end());
            return {false, 0, a, j};
        }
    }
    throw DslError(pos, "unknown symbol '" + name + "'");
}

inline JetForm evaluate(const Expression& e, const JetContextPtr& ctx) {
    using K = Expression::Kind;
    switch (e.kind) {
        case K::number: return JetForm(ctx, RationalFunction(e.value));
        case K::variable: {
            auto v = resolve_variable(ctx, e.name, e.pos);
            Symbol s = v.is_base ? ctx->base_symbol(v.base_index) : ctx->jet_symbol(v.fiber, v.J);
            return JetForm(ctx, RationalFunction::variable(s));
        }
        case K::dx: {
            auto v = resolve_variable(ctx, e.name, e.pos);
            if (!v.is_base)
                throw DslError(e.pos, "d(...) takes a base coordinate; use th(...) for contact forms");
            return JetForm::dx(ctx, v.base_index);
        }
        case K::theta: {
            auto v = resolve_variable(ctx, e.name, e.pos);
            if (v.is_base) throw DslError(e.pos, "th(...) takes a fiber or jet coordinate");
            return JetForm::theta(ctx, v.fiber, v.J);
        }
        case K::add: return evaluate(*e.children[0], ctx) + evaluate(*e.children[1], ctx);
        case K::sub: return evaluate(*e.children[0], ctx) - evaluate(*e.children[1], ctx);
        case K::mul:
        case K::wedge: return wedge(evaluate(*e.children[0], ctx), evaluate(*e.children[1], ctx));
        case K::neg: return -evaluate(*e.children[0], ctx);
        case K::pow: {
            JetForm base = evaluate(*e.children[0], ctx);
            JetForm out(ctx, RationalFunction(1));
            for (std::uint32_t i = 0; i < e.index; ++i) out = wedge(out, base);
            return out;
        }
        case K::total_d: {
            if (e.index < 1 || e.index > ctx->base_dim())
                throw DslError(e.pos, "total derivative direction out of range");
            return evaluate(*e.children[0], ctx).total_derivative(e.index - 1);
        }
    }
    throw std::logic_error("evaluate: unreachable");
}

}  // namespace dsl

inline JetForm parse_form(const std::string& text, const JetContextPtr& ctx) {
    dsl::Parser p(text);
    auto ast = p.parse();
    return dsl::evaluate(*ast, ctx);
}

// canonical printing is JetForm::str(): grevlex coefficients, sorted wedge words
inline std::string print_form(const JetForm& f) { return f.str(); }

}  // namespace jetvar
