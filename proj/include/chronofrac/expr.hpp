#pragma once

/**
 * @file expr.hpp
 * @brief Closed-form functions of one variable t.
 *
 * Grammar (whitespace ignored):
 *
 *   expr    = term { ("+" | "-") term }
 *   term    = unary { ("*" | "/") unary }
 *   unary   = ("-" | "+") unary | power
 *   power   = primary [ "^" unary ]          right-associative
 *   primary = number | "t" | func "(" expr ")" | "(" expr ")"
 *   func    = "sin" | "cos" | "exp" | "log" | "abs"
 *   number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
 *
 * A rational literal such as 1/3 is an ordinary division of two constants and
 * is folded exactly. Exponents must fold to a rational constant, so powers of
 * negative bases are decidable: x^(p/q) is real iff q is odd or x >= 0.
 */

#include "chronofrac/error.hpp"
#include "chronofrac/order.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace chronofrac {

enum class Func { Sin, Cos, Exp, Log, Abs };

inline std::string_view func_name(Func f) noexcept
{
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Abs: return "abs";
    }
    return "?";
}

/// Shortest decimal that round-trips to the same double.
class Expr {
public:
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Call };

    static Expr constant(const Rational& r) { return Expr(make(Kind::Const, r.to_double(), r)); }
    static Expr constant(double x)
    {
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidArgument, "constant must be finite");
        return Expr(make(Kind::Const, x, std::nullopt));
    }
    static Expr var() { return Expr(make(Kind::Var, 0.0, std::nullopt)); }

    static Expr add(const Expr& l, const Expr& r)
    {
        if (l.is_zero())
            return r;
        if (r.is_zero())
            return l;
        if (auto folded = fold(l, r, [](const Rational& a, const Rational& b) { return a + b; },
                               [](double a, double b) { return a + b; }))
            return *folded;
        return binary(Kind::Add, l, r);
    }
    static Expr sub(const Expr& l, const Expr& r)
    {
        if (r.is_zero())
            return l;
        if (auto folded = fold(l, r, [](const Rational& a, const Rational& b) { return a - b; },
                               [](double a, double b) { return a - b; }))
            return *folded;
        return binary(Kind::Sub, l, r);
    }
    static Expr mul(const Expr& l, const Expr& r)
    {
        if (l.is_zero() || r.is_zero())
            return constant(Rational(0));
        if (l.is_one())
            return r;
        if (r.is_one())
            return l;
        if (auto folded = fold(l, r, [](const Rational& a, const Rational& b) { return a * b; },
                               [](double a, double b) { return a * b; }))
            return *folded;
        return binary(Kind::Mul, l, r);
    }
    static Expr div(const Expr& l, const Expr& r)
    {
        if (r.is_one())
            return l;
        if (r.is_const() && r.node_->value == 0.0)
            throw Error(ErrorCode::DivisionByZero, "division by the constant 0");
        if (auto folded = fold(l, r, [](const Rational& a, const Rational& b) { return a / b; },
                               [](double a, double b) { return a / b; }))
            return *folded;
        return binary(Kind::Div, l, r);
    }
    static Expr neg(const Expr& e) { return mul(constant(Rational(-1)), e); }
    static Expr pow(const Expr& base, const Rational& exponent)
    {
        if (exponent.is_zero())
            return constant(Rational(1));
        if (exponent == Rational(1))
            return base;
        if (base.is_const() && base.node_->exact && exponent.is_integer() && exponent.num() >= 0 &&
            exponent.num() <= 16) {
            try {
                Rational r(1);
                for (std::int64_t i = 0; i < exponent.num(); ++i)
                    r = r * *base.node_->exact;
                return constant(r);
            } catch (const Error&) {
            }
        }
        auto n = make(Kind::Pow, 0.0, std::nullopt);
        n->lhs = base.node_;
        n->exponent = exponent;
        return Expr(std::move(n));
    }
    static Expr call(Func f, const Expr& arg)
    {
        auto n = make(Kind::Call, 0.0, std::nullopt);
        n->func = f;
        n->lhs = arg.node_;
        return Expr(std::move(n));
    }

    Kind kind() const noexcept { return node_->kind; }
    bool is_const() const noexcept { return node_->kind == Kind::Const; }
    std::optional<Rational> exact_value() const { return is_const() ? node_->exact : std::nullopt; }
    std::optional<double> const_value() const
    {
        return is_const() ? std::optional<double>(node_->value) : std::nullopt;
    }

    Expr lhs() const { return Expr(node_->lhs); }
    Expr rhs() const { return Expr(node_->rhs); }
    const Rational& exponent() const noexcept { return node_->exponent; }
    Func func() const noexcept { return node_->func; }

    double eval(double t) const { return eval_node(*node_, t); }
    double operator()(double t) const { return eval(t); }

    std::string to_string() const
    {
        std::string out;
        print(*node_, out);
        return out;
    }

private:
    struct Node {
        Kind kind;
        double value = 0.0;
        std::optional<Rational> exact;
        Rational exponent;
        Func func = Func::Sin;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    std::shared_ptr<const Node> node_;

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(Kind k, double value, std::optional<Rational> exact)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->value = value;
        n->exact = std::move(exact);
        return n;
    }

    static Expr binary(Kind k, const Expr& l, const Expr& r)
    {
        auto n = make(k, 0.0, std::nullopt);
        n->lhs = l.node_;
        n->rhs = r.node_;
        return Expr(std::move(n));
    }

    bool is_zero() const noexcept { return is_const() && node_->value == 0.0; }
    bool is_one() const noexcept { return is_const() && node_->value == 1.0; }

    template <typename ExactOp, typename RealOp>
    static std::optional<Expr> fold(const Expr& l, const Expr& r, ExactOp exact_op, RealOp real_op)
    {
        if (!l.is_const() || !r.is_const())
            return std::nullopt;
        if (l.node_->exact && r.node_->exact) {
            try {
                return constant(exact_op(*l.node_->exact, *r.node_->exact));
            } catch (const Error&) {
                // overflow: fall through to floating point
            }
        }
        const double v = real_op(l.node_->value, r.node_->value);
        if (!std::isfinite(v))
            return std::nullopt;
        return constant(v);
    }

    static double checked(double v, const char* what)
    {
        if (!std::isfinite(v))
            throw Error(ErrorCode::DomainError, std::string("non-finite result in ") + what);
        return v;
    }

    static double eval_node(const Node& n, double t)
    {
        switch (n.kind) {
        case Kind::Const: return n.value;
        case Kind::Var: return t;
        case Kind::Add: return checked(eval_node(*n.lhs, t) + eval_node(*n.rhs, t), "+");
        case Kind::Sub: return checked(eval_node(*n.lhs, t) - eval_node(*n.rhs, t), "-");
        case Kind::Mul: return checked(eval_node(*n.lhs, t) * eval_node(*n.rhs, t), "*");
        case Kind::Div: {
            const double num = eval_node(*n.lhs, t);
            const double den = eval_node(*n.rhs, t);
            if (den == 0.0)
                throw Error(ErrorCode::DivisionByZero, "division by zero at t = " + shortest_repr(t));
            return checked(num / den, "/");
        }
        case Kind::Pow: return checked(real_pow(eval_node(*n.lhs, t), n.exponent), "^");
        case Kind::Call: {
            const double x = eval_node(*n.lhs, t);
            switch (n.func) {
            case Func::Sin: return std::sin(x);
            case Func::Cos: return std::cos(x);
            case Func::Exp: return checked(std::exp(x), "exp");
            case Func::Log:
                if (x <= 0.0)
                    throw Error(ErrorCode::DomainError, "log of nonpositive value " + shortest_repr(x));
                return std::log(x);
            case Func::Abs: return std::fabs(x);
            }
        }
        }
        throw Error(ErrorCode::DomainError, "corrupt expression node");
    }

    static void print_rational(const Rational& r, std::string& out)
    {
        if (r.is_integer() && !r.is_negative()) {
            out += r.to_string();
            return;
        }
        out += "(" + r.to_string() + ")";
    }

    static void print(const Node& n, std::string& out)
    {
        switch (n.kind) {
        case Kind::Const:
            if (n.exact) {
                print_rational(*n.exact, out);
            } else if (n.value < 0.0) {
                out += "(" + shortest_repr(n.value) + ")";
            } else {
                out += shortest_repr(n.value);
            }
            return;
        case Kind::Var: out += "t"; return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            const char* op = n.kind == Kind::Add ? " + " : n.kind == Kind::Sub ? " - " : n.kind == Kind::Mul ? " * " : " / ";
            out += "(";
            print(*n.lhs, out);
            out += op;
            print(*n.rhs, out);
            out += ")";
            return;
        }
        case Kind::Pow:
            out += "(";
            print(*n.lhs, out);
            out += "^";
            print_rational(n.exponent, out);
            out += ")";
            return;
        case Kind::Call:
            out += func_name(n.func);
            out += "(";
            print(*n.lhs, out);
            out += ")";
            return;
        }
    }
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse()
    {
        Expr e = expr();
        skip_space();
        if (pos_ != text_.size())
            throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr()
    {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::add(lhs, term());
            else if (accept('-'))
                lhs = Expr::sub(lhs, term());
            else
                return lhs;
        }
    }

    Expr term()
    {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::mul(lhs, unary());
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Expr rhs = unary();
                try {
                    lhs = Expr::div(lhs, rhs);
                } catch (const Error&) {
                    throw SyntaxError(at, "division by the constant 0");
                }
            } else {
                return lhs;
            }
        }
    }

    Expr unary()
    {
        if (accept('-'))
            return Expr::neg(unary());
        if (accept('+'))
            return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept('^')) {
            skip_space();
            const std::size_t at = pos_;
            Expr exponent = unary();
            auto exact = exponent.exact_value();
            if (!exact)
                throw SyntaxError(at, "exponent must be a rational constant");
            return Expr::pow(base, *exact);
        }
        return base;
    }

    Expr primary()
    {
        skip_space();
        if (pos_ >= text_.size())
            throw SyntaxError(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (!accept(')'))
                throw SyntaxError(pos_, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return identifier();
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }

    Expr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                digits();
            else
                pos_ = save;
        }
        const auto literal = text_.substr(start, pos_ - start);
        if (literal == ".")
            throw SyntaxError(start, "malformed number");
        if (auto exact = parse_decimal(literal))
            return Expr::constant(*exact);
        const double v = std::strtod(std::string(literal).c_str(), nullptr);
        if (!std::isfinite(v))
            throw SyntaxError(start, "number out of range");
        return Expr::constant(v);
    }

    Expr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const auto name = text_.substr(start, pos_ - start);
        if (name == "t")
            return Expr::var();
        Func f;
        if (name == "sin")
            f = Func::Sin;
        else if (name == "cos")
            f = Func::Cos;
        else if (name == "exp")
            f = Func::Exp;
        else if (name == "log")
            f = Func::Log;
        else if (name == "abs")
            f = Func::Abs;
        else
            throw SyntaxError(start, "unknown identifier '" + std::string(name) + "'");
        if (!accept('('))
            throw SyntaxError(pos_, "expected '(' after " + std::string(name));
        Expr arg = expr();
        if (!accept(')'))
            throw SyntaxError(pos_, "expected ')'");
        return Expr::call(f, arg);
    }
};

} // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

/// d/dt by the usual rules, with constant folding only.
inline Expr classical_derivative(const Expr& e)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Const: return Expr::constant(Rational(0));
    case K::Var: return Expr::constant(Rational(1));
    case K::Add: return Expr::add(classical_derivative(e.lhs()), classical_derivative(e.rhs()));
    case K::Sub: return Expr::sub(classical_derivative(e.lhs()), classical_derivative(e.rhs()));
    case K::Mul:
        return Expr::add(Expr::mul(classical_derivative(e.lhs()), e.rhs()),
                         Expr::mul(e.lhs(), classical_derivative(e.rhs())));
    case K::Div: {
        const Expr num = Expr::sub(Expr::mul(classical_derivative(e.lhs()), e.rhs()),
                                   Expr::mul(e.lhs(), classical_derivative(e.rhs())));
        return Expr::div(num, Expr::pow(e.rhs(), Rational(2)));
    }
    case K::Pow: {
        const Rational r = e.exponent();
        return Expr::mul(Expr::mul(Expr::constant(r), Expr::pow(e.lhs(), r - Rational(1))),
                         classical_derivative(e.lhs()));
    }
    case K::Call: {
        const Expr u = e.lhs();
        const Expr du = classical_derivative(u);
        switch (e.func()) {
        case Func::Sin: return Expr::mul(Expr::call(Func::Cos, u), du);
        case Func::Cos: return Expr::neg(Expr::mul(Expr::call(Func::Sin, u), du));
        case Func::Exp: return Expr::mul(Expr::call(Func::Exp, u), du);
        case Func::Log: return Expr::div(du, u);
        case Func::Abs: throw Error(ErrorCode::NonDifferentiable, "abs has no derivative at 0");
        }
    }
    }
    throw Error(ErrorCode::NonDifferentiable, "corrupt expression node");
}

} // namespace chronofrac
