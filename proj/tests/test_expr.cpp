#include "chronofrac/expr.hpp"
#include "support/gen.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chronofrac;

namespace {

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

// Random expression over the full grammar; depth-limited, no abs (non-smooth).
Expr random_expr(testsupport::Gen& g, int depth)
{
    if (depth == 0 || g.integer(0, 3) == 0) {
        if (g.integer(0, 1) == 0)
            return Expr::var();
        return Expr::constant(Rational(g.integer(-9, 9), g.integer(1, 4)));
    }
    switch (g.integer(0, 6)) {
    case 0: return Expr::add(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 1: return Expr::sub(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 2: return Expr::mul(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 3: return Expr::div(random_expr(g, depth - 1), Expr::add(Expr::constant(Rational(5)), Expr::pow(random_expr(g, depth - 1), Rational(2))));
    case 4: return Expr::pow(random_expr(g, depth - 1), Rational(g.integer(0, 4)));
    case 5: return Expr::call(g.integer(0, 1) ? Func::Sin : Func::Cos, random_expr(g, depth - 1));
    default: return Expr::call(Func::Exp, Expr::mul(Expr::constant(Rational(1, 4)), random_expr(g, depth - 1)));
    }
}

} // namespace

TEST(Parse, Examples)
{
    EXPECT_DOUBLE_EQ(parse_expr("t^2").eval(3), 9);
    EXPECT_DOUBLE_EQ(parse_expr("t^(1/3)").eval(-8), -2);
    try {
        parse_expr("2*");
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position(), 2u);
        EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    }
}

TEST(Parse, Precedence)
{
    EXPECT_DOUBLE_EQ(parse_expr("-t^2").eval(3), -9);
    EXPECT_DOUBLE_EQ(parse_expr("2^3^2").eval(0), 512);
    EXPECT_DOUBLE_EQ(parse_expr("1 + 2*3 - 4/2").eval(0), 5);
    EXPECT_DOUBLE_EQ(parse_expr("(1+2)*3").eval(0), 9);
    EXPECT_DOUBLE_EQ(parse_expr("2^-1").eval(0), 0.5);
    EXPECT_DOUBLE_EQ(parse_expr("--t").eval(4), 4);
    EXPECT_DOUBLE_EQ(parse_expr("1.5e1 * t").eval(2), 30);
    EXPECT_DOUBLE_EQ(parse_expr("sin(0) + cos(0) + exp(0) + log(1) + abs(-2)").eval(0), 4);
}

TEST(Parse, Errors)
{
    for (const char* bad : {"", "t +", "(t", "t)", "foo(t)", "t^t", "2 3", "t^(1/0)", "sin t", "1..2", "x"})
        EXPECT_THROW(parse_expr(bad), SyntaxError) << bad;
}

TEST(Eval, Examples)
{
    EXPECT_DOUBLE_EQ(parse_expr("1/t").eval(2), 0.5);
    EXPECT_EQ(code_of([] { (void)parse_expr("1/t").eval(0); }), ErrorCode::DivisionByZero);
    EXPECT_DOUBLE_EQ(parse_expr("(t-1)^3").eval(0), -1);
    EXPECT_EQ(code_of([] { (void)parse_expr("log(t)").eval(0); }), ErrorCode::DomainError);
    EXPECT_EQ(code_of([] { (void)parse_expr("t^(1/2)").eval(-1); }), ErrorCode::NegativeBaseUndefined);
}

TEST(Print, RoundTripsThroughTheParser)
{
    testsupport::Gen g(23);
    for (int i = 0; i < 300; ++i) {
        const Expr e = random_expr(g, 4);
        const Expr back = parse_expr(e.to_string());
        EXPECT_EQ(back.to_string(), e.to_string());
        for (int k = 0; k < 5; ++k) {
            const double t = g.uniform(-3, 3);
            double x = 0, y = 0;
            bool ex = false, ey = false;
            try { x = e.eval(t); } catch (const Error&) { ex = true; }
            try { y = back.eval(t); } catch (const Error&) { ey = true; }
            ASSERT_EQ(ex, ey) << e.to_string();
            if (!ex) {
                EXPECT_NEAR(x, y, 1e-12 * std::max(1.0, std::fabs(x))) << e.to_string();
            }
        }
    }
}

TEST(Print, ExactRationalsSurvive)
{
    const Expr e = parse_expr("t^(2/3) + 1/3");
    EXPECT_EQ(parse_expr(e.to_string()).to_string(), e.to_string());
    EXPECT_NE(e.to_string().find("1/3"), std::string::npos);
}

TEST(ClassicalDerivative, Examples)
{
    const Expr d = classical_derivative(parse_expr("t^2"));
    for (double t : {-2.0, 0.0, 1.5})
        EXPECT_DOUBLE_EQ(d.eval(t), 2 * t);
    EXPECT_EQ(classical_derivative(parse_expr("7")).const_value(), 0.0);
    const Expr c = classical_derivative(parse_expr("t^(1/3)"));
    EXPECT_DOUBLE_EQ(c.eval(8), (1.0 / 3) * std::pow(8.0, -2.0 / 3));
    EXPECT_EQ(code_of([] { (void)classical_derivative(parse_expr("abs(t)")); }), ErrorCode::NonDifferentiable);
}

TEST(ClassicalDerivative, AgreesWithCentralDifferences)
{
    testsupport::Gen g(29);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const Expr e = random_expr(g, 3);
        const Expr d = classical_derivative(e);
        const double t = g.uniform(-2, 2);
        const double h = 1e-6;
        try {
            const double fd = (e.eval(t + h) - e.eval(t - h)) / (2 * h);
            const double fd2 = (e.eval(t + 2 * h) - e.eval(t - 2 * h)) / (4 * h);
            const double exact = d.eval(t);
            // Central differences lose about |f| * eps / h to cancellation, and
            // (fd2 - fd) / 3 estimates their O(h^2) truncation error.
            const double noise = 1e-16 * std::max(1.0, std::fabs(e.eval(t))) / h + std::fabs(fd2 - fd) / 3;
            EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, std::fabs(exact)) + noise) << e.to_string() << " t=" << t;
            ++checked;
        } catch (const Error&) {
        }
    }
    EXPECT_GT(checked, 300);
}
