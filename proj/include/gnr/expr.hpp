#pragma once

// Math expressions in one free variable.
//
// Grammar (whitespace is insignificant):
//
//   expression := term { ("+" | "-") term }
//   term       := power { ("*" | "/") power }
//   power      := unary [ "^" power ]                 (right associative)
//   unary      := ("-" | "+") unary | primary
//   primary    := number | constant | variable
//               | function "(" expression ")" | "(" expression ")"
//   number     := digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//   constant   := "pi" | "e"
//   function   := sin | cos | tan | asin | atan | exp | ln | sqrt | abs
//
// Unary minus binds tighter than "^", so "-s^2" is (-s)^2.  The exponent of
// "^" must be a constant expression whose value is an integer or a
// half-integer; half-integer powers need a non-negative base.  Use
// exp(b*ln(a)) for anything else.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "gnr/errors.hpp"
#include "gnr/jet.hpp"

namespace gnr {

enum class NodeKind { constant, variable, unary, binary, call };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, asin, atan, exp, ln, sqrt, abs };

inline constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctionNames{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"asin", Function::asin},
    {"atan", Function::atan},
    {"exp", Function::exp},
    {"ln", Function::ln},
    {"sqrt", Function::sqrt},
    {"abs", Function::abs},
}};

inline std::string_view function_name(Function f) {
    for (const auto& [name, fn] : kFunctionNames)
        if (fn == f) return name;
    return "?";
}

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

/// Immutable AST node.  Unary nodes are always negation.
struct ExprNode {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;      // constant literal; for pow nodes the exponent value
    std::string name;        // named constant ("pi", "e") or variable name
    BinaryOp op = BinaryOp::add;
    Function function = Function::sin;
    NodePtr lhs;             // operand of unary/call, left operand of binary
    NodePtr rhs;             // right operand of binary
    std::size_t offset = 0;  // byte offset in the source text
};

/// A parsed expression: shared immutable tree plus its variable name.
class Expr {
public:
    Expr() = default;
    Expr(NodePtr root, std::string variable) : root_(std::move(root)), variable_(std::move(variable)) {}

    const ExprNode& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    const std::string& variable() const { return variable_; }
    bool empty() const { return !root_; }

private:
    NodePtr root_;
    std::string variable_ = "s";
};

std::string to_string(const ExprNode& node);
inline std::string to_string(const Expr& e) { return to_string(e.root()); }

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline bool uses_variable(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::variable: return true;
        case NodeKind::constant: return false;
        case NodeKind::unary:
        case NodeKind::call: return uses_variable(*n.lhs);
        case NodeKind::binary: return uses_variable(*n.lhs) || uses_variable(*n.rhs);
    }
    return false;
}

class Parser {
public:
    Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        NodePtr n = expression();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        return n;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(BinaryOp op, NodePtr l, NodePtr r, std::size_t at, double value = 0.0) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::binary;
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        n->offset = at;
        n->value = value;
        return n;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('+'))
                lhs = binary(BinaryOp::add, lhs, term(), at);
            else if (accept('-'))
                lhs = binary(BinaryOp::sub, lhs, term(), at);
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = power();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('*'))
                lhs = binary(BinaryOp::mul, lhs, power(), at);
            else if (accept('/'))
                lhs = binary(BinaryOp::div, lhs, power(), at);
            else
                return lhs;
        }
    }

    NodePtr power();
    NodePtr unary() {
        skip_ws();
        const std::size_t at = pos_;
        if (accept('-')) {
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::unary;
            n->lhs = unary();
            n->offset = at;
            return n;
        }
        if (accept('+')) return unary();
        return primary();
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        const std::size_t at = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            const std::string_view ident = text_.substr(pos_, end - pos_);
            pos_ = end;
            skip_ws();
            const bool has_call = pos_ < text_.size() && text_[pos_] == '(';
            for (const auto& [fname, fn] : kFunctionNames) {
                if (ident != fname) continue;
                if (!has_call) throw ParseError("function '" + std::string(ident) + "' requires one argument", at);
                ++pos_;
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ')')
                    throw ParseError("function '" + std::string(ident) + "' takes exactly one argument", pos_);
                NodePtr arg = expression();
                if (accept(','))
                    throw ParseError("function '" + std::string(ident) + "' takes exactly one argument", pos_ - 1);
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::call;
                n->function = fn;
                n->lhs = std::move(arg);
                n->offset = at;
                return n;
            }
            if (has_call && (ident == variable_ || ident == "pi" || ident == "e"))
                throw ParseError("'" + std::string(ident) + "' is not a function", at);
            auto n = std::make_shared<ExprNode>();
            n->offset = at;
            if (ident == variable_) {
                n->kind = NodeKind::variable;
                n->name = std::string(ident);
            } else if (ident == "pi") {
                n->kind = NodeKind::constant;
                n->name = "pi";
                n->value = std::numbers::pi;
            } else if (ident == "e") {
                n->kind = NodeKind::constant;
                n->name = "e";
                n->value = std::numbers::e;
            } else {
                throw ParseError("unknown identifier '" + std::string(ident) + "'", at);
            }
            return n;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
    }

    NodePtr number() {
        const std::size_t at = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            std::size_t start = end;
            while (end < text_.size() && text_[end] >= '0' && text_[end] <= '9') ++end;
            return end > start;
        };
        bool any = digits();
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            any = digits() || any;
        }
        if (!any) throw ParseError("malformed number", at);
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t save = end;
            ++end;
            if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
            if (!digits()) end = save;  // "2e" is 2 followed by the constant e: reject below
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + pos_, text_.data() + end, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + end) throw ParseError("malformed number", at);
        pos_ = end;
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::constant;
        n->value = v;
        n->offset = at;
        return n;
    }

    std::string_view text_;
    std::string_view variable_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Evaluate as a jet of the given order at variable value x0.
template <int N>
Jet<N> evaluate(const ExprNode& node, double x0);

inline double eval_scalar(const ExprNode& node, double x0) { return evaluate<0>(node, x0).value(); }
inline double eval_scalar(const Expr& e, double x0) { return eval_scalar(e.root(), x0); }

/// Value and derivatives through order 4.
inline Jet4 eval_jet(const Expr& e, double x0) { return evaluate<4>(e.root(), x0); }

inline NodePtr detail::Parser::power() {
    NodePtr base = unary();
    skip_ws();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    NodePtr exponent = power();
    if (uses_variable(*exponent))
        throw ParseError("exponent must be constant; use exp(b*ln(a)) for variable powers", at);
    double p = 0.0;
    try {
        p = eval_scalar(*exponent, 0.0);
    } catch (const DomainError& err) {
        throw ParseError(std::string("exponent cannot be evaluated: ") + err.what(), at);
    }
    const double twice = 2.0 * p;
    if (!std::isfinite(p) || std::abs(twice - std::round(twice)) > 1e-12 || std::abs(p) > 64.0)
        throw ParseError("exponent must be an integer or half-integer constant", at);
    return binary(BinaryOp::pow, std::move(base), std::move(exponent), at, std::round(twice) / 2.0);
}

/// Parse text as an expression in `variable` (default "s").
inline Expr parse(std::string_view text, std::string_view variable = "s") {
    if (variable == "pi" || variable == "e") throw ParseError("reserved variable name", 0);
    detail::Parser p(text, variable);
    return Expr(p.parse(), std::string(variable));
}

inline std::string to_string(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::constant: return n.name.empty() ? detail::format_double(n.value) : n.name;
        case NodeKind::variable: return n.name;
        case NodeKind::unary: return "(-" + to_string(*n.lhs) + ")";
        case NodeKind::call: return std::string(function_name(n.function)) + "(" + to_string(*n.lhs) + ")";
        case NodeKind::binary: {
            const char* op = " + ";
            switch (n.op) {
                case BinaryOp::add: op = " + "; break;
                case BinaryOp::sub: op = " - "; break;
                case BinaryOp::mul: op = " * "; break;
                case BinaryOp::div: op = " / "; break;
                case BinaryOp::pow: op = "^"; break;
            }
            return "(" + to_string(*n.lhs) + op + to_string(*n.rhs) + ")";
        }
    }
    return {};
}

/// Same shape, operators, functions and literal values (offsets ignored).
inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::constant: return a.value == b.value && a.name == b.name;
        case NodeKind::variable: return a.name == b.name;
        case NodeKind::unary: return structurally_equal(*a.lhs, *b.lhs);
        case NodeKind::call: return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
        case NodeKind::binary:
            return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
    return false;
}

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& what, const ExprNode& n) {
    throw DomainError(what, to_string(n), n.offset);
}

template <int N>
Jet<N> checked(Jet<N> r, const ExprNode& n) {
    for (int k = 0; k <= N; ++k)
        if (!std::isfinite(r.taylor(k))) domain_fail("non-finite result", n);
    return r;
}

}  // namespace detail

template <int N>
Jet<N> evaluate(const ExprNode& n, double x0) {
    using detail::domain_fail;
    constexpr bool needs_derivatives = N > 0;
    switch (n.kind) {
        case NodeKind::constant: return Jet<N>(n.value);
        case NodeKind::variable: return Jet<N>::variable(x0);
        case NodeKind::unary: return -evaluate<N>(*n.lhs, x0);
        case NodeKind::binary: {
            const Jet<N> a = evaluate<N>(*n.lhs, x0);
            if (n.op == BinaryOp::pow) {
                const double p = n.value;
                if (p == std::floor(p)) {
                    if (p < 0 && a.value() == 0.0) domain_fail("division by zero", n);
                    return detail::checked(pow(a, static_cast<int>(p)), n);
                }
                if (a.value() < 0.0) domain_fail("half-integer power of a negative base", n);
                if (a.value() == 0.0 && (needs_derivatives || p < 0))
                    domain_fail("half-integer power is not differentiable at zero", n);
                return detail::checked(pow(sqrt(a), static_cast<int>(std::round(2.0 * p))), n);
            }
            const Jet<N> b = evaluate<N>(*n.rhs, x0);
            switch (n.op) {
                case BinaryOp::add: return a + b;
                case BinaryOp::sub: return a - b;
                case BinaryOp::mul: return a * b;
                case BinaryOp::div:
                    if (b.value() == 0.0) domain_fail("division by zero", n);
                    return detail::checked(a / b, n);
                case BinaryOp::pow: break;
            }
            break;
        }
        case NodeKind::call: {
            const Jet<N> a = evaluate<N>(*n.lhs, x0);
            const double v = a.value();
            switch (n.function) {
                case Function::sin: return sin(a);
                case Function::cos: return cos(a);
                case Function::tan:
                    if (std::abs(std::cos(v)) < 1e-15) domain_fail("tan pole", n);
                    return detail::checked(tan(a), n);
                case Function::asin:
                    if (std::abs(v) > 1.0) domain_fail("asin argument outside [-1, 1]", n);
                    if (needs_derivatives && std::abs(v) == 1.0) domain_fail("asin is not differentiable at +-1", n);
                    return detail::checked(asin(a), n);
                case Function::atan: return atan(a);
                case Function::exp: return detail::checked(exp(a), n);
                case Function::ln:
                    if (v <= 0.0) domain_fail("ln of a non-positive argument", n);
                    return detail::checked(log(a), n);
                case Function::sqrt:
                    if (v < 0.0) domain_fail("sqrt of a negative argument", n);
                    if (needs_derivatives && v == 0.0) domain_fail("sqrt is not differentiable at zero", n);
                    return detail::checked(sqrt(a), n);
                case Function::abs:
                    if (needs_derivatives && std::abs(v) < 1e-12) domain_fail("abs is not differentiable at zero", n);
                    return abs(a);
            }
            break;
        }
    }
    return Jet<N>();
}

}  // namespace gnr
