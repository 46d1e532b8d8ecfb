#include "chronofrac/fracderiv.hpp"
#include "chronofrac/scale_dsl.hpp"
#include "support/gen.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chronofrac;

namespace {

FractionalOrder ord(std::int64_t p, std::int64_t q) { return FractionalOrder(Rational(p, q)); }

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

bool rel_near(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

// Right-scattered points of a few scales, for closed-form invariants.
std::vector<std::pair<TimeScale, double>> scattered_points()
{
    std::vector<std::pair<TimeScale, double>> out;
    for (const char* spec : {"Z", "hZ:1/2", "hZ:2@1", "hZ:0.1", "union:{[0,1],{3/2},[2,3],{4},{5}}", "cantor:3"}) {
        const auto s = parse_scale(spec);
        for (const auto& p : s.pieces(-3, 4.5))
            if (!p.dense && s.contains(p.a) && s.in_kappa(p.a))
                out.emplace_back(s, p.a);
    }
    return out;
}

} // namespace

// ---- limit_quotient -------------------------------------------------------

TEST(LimitQuotient, KolwankarGangalCubeRoot)
{
    // Oracle: at s = +-4^-j the quotient (0 - s^(1/3)) / (0 - s)^(1/3) is exactly 1.
    const auto third = ord(1, 3);
    for (int j = 1; j <= 20; ++j)
        for (double s : {std::ldexp(1.0, -2 * j), -std::ldexp(1.0, -2 * j)})
            EXPECT_DOUBLE_EQ((0 - rpow(s, third)) / rpow(0 - s, third), 1.0);
    const auto r = limit_quotient(TimeScale::reals(), 0, [&](double s) { return 0 - rpow(s, third); }, third);
    EXPECT_NEAR(r.value, 1.0, 1e-6);
    EXPECT_EQ(r.method, Method::TwoSidedLimit);
}

TEST(LimitQuotient, ZeroNumerator)
{
    for (double t : {0.0, 2.5, -7.0}) {
        const auto r = limit_quotient(TimeScale::reals(), t, [](double) { return 0.0; }, ord(1, 2));
        EXPECT_EQ(r.value, 0.0);
    }
    const auto c = limit_quotient(TimeScale::cantor(3), 0.1, [](double) { return 0.0; }, ord(1, 3));
    EXPECT_EQ(c.value, 0.0);
}

TEST(LimitQuotient, SingleLeftPointCannotConverge)
{
    const auto u = TimeScale::finite_union({SinglePoint{0}, ClosedInterval{1, 2}});
    EXPECT_EQ(u.approach_points(1, Side::left, 64).size(), 1u);
    EXPECT_EQ(code_of([&] { (void)limit_quotient(u, 1, [](double s) { return 1 - s; }, ord(1, 2)); }),
              ErrorCode::Divergent);
}

TEST(LimitQuotient, DisagreeingSidesDiverge)
{
    // |t| at 0: left quotient -> -1, right quotient -> +1.
    EXPECT_EQ(code_of([] {
                  (void)frac_derivative(parse_expr("abs(t)"), TimeScale::reals(), 0, FractionalOrder::one());
              }),
              ErrorCode::Divergent);
}

TEST(LimitQuotient, EmptyRequiredSideIsNoApproach)
{
    LimitOptions opts;
    opts.side = Side::left;
    EXPECT_EQ(code_of([&] {
                  (void)limit_quotient(TimeScale::interval(0, 1), 0, [](double s) { return s; }, ord(1, 2), opts);
              }),
              ErrorCode::NoApproach);
}

// ---- frac_derivative ------------------------------------------------------

TEST(FracDerivative, SquareOnIntegers)
{
    // mu^(1-alpha) (sigma + t) with mu = 1: 5 + 4.
    const auto r = frac_derivative(parse_expr("t^2"), TimeScale::integers(), 4, ord(1, 2));
    EXPECT_EQ(r.value, 9);
    EXPECT_EQ(r.method, Method::ClosedFormScattered);
    EXPECT_EQ(r.error_estimate, 0);
}

TEST(FracDerivative, ConstantsVanishEverywhere)
{
    const FnOnScale c = parse_expr("7");
    const std::vector<std::pair<std::string, double>> cases{
        {"Z", 3}, {"hZ:1/2", -1}, {"R", 0}, {"R", 2.5}, {"cantor:3", 1.0 / 3}, {"cantor:3", 0.1}, {"union:{[0,1],{2}}", 0.5}};
    for (const auto& [spec, t] : cases)
        for (auto a : {ord(1, 3), ord(1, 2), ord(3, 4), ord(1, 1)})
            EXPECT_EQ(frac_derivative(c, parse_scale(spec), t, a).value, 0.0) << spec << " t=" << t;
}

TEST(FracDerivative, IdentityOnCantorPoint)
{
    for (int d : {1, 2, 3, 6})
        for (auto a : {ord(1, 3), ord(1, 2), ord(2, 3), ord(1, 1)}) {
            const auto r = frac_derivative(parse_expr("t"), TimeScale::cantor(d), 1.0 / 3, a);
            EXPECT_NEAR(r.value, std::pow(1.0 / 3, 1 - a.to_double()), 1e-12) << "d=" << d;
            EXPECT_EQ(r.method, Method::ClosedFormScattered);
        }
}

TEST(FracDerivative, CubeRootAtZeroOnReals)
{
    const auto r = frac_derivative(parse_expr("t^(1/3)"), TimeScale::reals(), 0, ord(1, 3));
    EXPECT_NEAR(r.value, 1.0, 1e-6);
    EXPECT_EQ(r.method, Method::TwoSidedLimit);
}

TEST(FracDerivative, NonOddReciprocalUsesLeftLimit)
{
    const auto r = frac_derivative(parse_expr("t^2"), TimeScale::reals(), 1.5, ord(1, 2));
    EXPECT_EQ(r.method, Method::LeftLimit);
    EXPECT_NEAR(r.value, 0.0, 1e-9);
}

TEST(FracDerivative, MissingLeftSide)
{
    // t = 1 is left-scattered and right-dense.
    const auto u = TimeScale::finite_union({SinglePoint{0}, ClosedInterval{1, 2}});
    const FnOnScale f = parse_expr("t^2");
    EXPECT_NEAR(frac_derivative(f, u, 1, FractionalOrder::one()).value, 2.0, 1e-8);
    EXPECT_NEAR(frac_derivative(f, u, 1, ord(1, 3)).value, 0.0, 1e-9);
    EXPECT_EQ(code_of([&] { (void)frac_derivative(f, u, 1, ord(1, 2)); }), ErrorCode::NoApproach);
    EXPECT_EQ(code_of([&] { (void)frac_derivative(f, TimeScale::interval(0, 1), 0, ord(2, 3)); }), ErrorCode::NoApproach);
}

TEST(FracDerivative, Errors)
{
    const auto u = TimeScale::finite_union({ClosedInterval{0, 1}, SinglePoint{2}});
    EXPECT_EQ(code_of([&] { (void)frac_derivative(parse_expr("t"), u, 2, ord(1, 2)); }), ErrorCode::NotInKappa);
    EXPECT_EQ(code_of([&] { (void)frac_derivative(parse_expr("t"), u, 1.5, ord(1, 2)); }), ErrorCode::PointNotInScale);
    const FnOnScale table = FnOnScale::table({{0, 1}, {1, 3}});
    EXPECT_EQ(frac_derivative(table, TimeScale::integers(), 0, ord(1, 2)).value, 2);
    EXPECT_EQ(code_of([&] { (void)frac_derivative(table, TimeScale::integers(), 1, ord(1, 2)); }),
              ErrorCode::TablePointMissing);
}

// ---- delta_derivative -----------------------------------------------------

TEST(DeltaDerivative, Examples)
{
    EXPECT_EQ(delta_derivative(parse_expr("t^2"), TimeScale::integers(), 4).value, 25 - 16);
    EXPECT_NEAR(delta_derivative(parse_expr("t^2"), TimeScale::reals(), 3).value, 6, 1e-6);
    const std::vector<std::pair<std::string, double>> cases{
        {"Z", -2}, {"hZ:1/2", 1.5}, {"R", 0.7}, {"cantor:3", 1.0 / 3}, {"cantor:3", 0.1}, {"union:{[0,1],{2}}", 1}};
    for (const auto& [spec, t] : cases)
        EXPECT_NEAR(delta_derivative(parse_expr("t"), parse_scale(spec), t).value, 1, 1e-9) << spec;
}

TEST(DeltaDerivative, IsTheOrderOneFractionalDerivative)
{
    testsupport::Gen g(41);
    for (const char* spec : {"Z", "hZ:1/2", "R", "cantor:3", "union:{[0,1],{3/2},[2,3]}"}) {
        const auto s = parse_scale(spec);
        for (int i = 0; i < 20; ++i) {
            const FnOnScale f = parse_expr(g.polynomial());
            const double t = s.is_reals() ? g.uniform(-2, 2) : s.pieces(0, 3)[static_cast<std::size_t>(g.integer(0, 2))].a;
            const auto a = frac_derivative(f, s, t, FractionalOrder::one());
            const auto b = delta_derivative(f, s, t);
            EXPECT_EQ(a.value, b.value);
            EXPECT_EQ(a.method, b.method);
        }
    }
}

// ---- invariants -----------------------------------------------------------

TEST(Invariants, SimpleUsefulFormulaAtScatteredPoints)
{
    testsupport::Gen g(43);
    for (const auto& [s, t] : scattered_points()) {
        const FnOnScale f = parse_expr(g.polynomial());
        const auto a = g.order();
        const double d = frac_derivative(f, s, t, a).value;
        const double mu = s.graininess(t);
        const double rhs = f(t) + std::pow(mu, a.to_double()) * d;
        EXPECT_TRUE(rel_near(f(s.sigma(t)), rhs, 1e-12)) << s.describe() << " t=" << t;
    }
}

TEST(Invariants, IdentityFunction)
{
    testsupport::Gen g(47);
    const FnOnScale id = parse_expr("t");
    for (const auto& [s, t] : scattered_points()) {
        const auto a = g.order();
        EXPECT_NEAR(frac_derivative(id, s, t, a).value, std::pow(s.graininess(t), 1 - a.to_double()), 1e-12);
    }
    for (double t : {-3.0, 0.0, 0.4, 11.0}) {
        EXPECT_NEAR(frac_derivative(id, TimeScale::reals(), t, ord(1, 2)).value, 0.0, 1e-9);
        EXPECT_NEAR(frac_derivative(id, TimeScale::reals(), t, ord(1, 3)).value, 0.0, 1e-9);
        EXPECT_NEAR(frac_derivative(id, TimeScale::reals(), t, FractionalOrder::one()).value, 1.0, 1e-9);
    }
}

TEST(Invariants, UniformGridForwardQuotient)
{
    testsupport::Gen g(53);
    for (double h : {0.5, 1.0, 2.0, 0.1, 3.0}) {
        const auto s = TimeScale::uniform_grid(h);
        for (int i = 0; i < 40; ++i) {
            const Expr f = parse_expr(g.polynomial());
            const double t = static_cast<double>(g.integer(-10, 10)) * h;
            const auto a = g.order();
            const double oracle = (f.eval(t + h) - f.eval(t)) / std::pow(h, a.to_double());
            EXPECT_DOUBLE_EQ(frac_derivative(f, s, t, a).value, oracle) << f.to_string() << " h=" << h;
        }
    }
}

TEST(Invariants, RealsAgreeWithRawQuotients)
{
    testsupport::Gen g(59);
    for (int i = 0; i < 60; ++i) {
        const Expr f = parse_expr(g.polynomial(3));
        const double t = g.uniform(-2, 2);
        const auto a = g.order();
        const auto r = frac_derivative(f, TimeScale::reals(), t, a);
        // Independent estimate: plain quotients at two small offsets. Their bias decays
        // like d^p, so the remaining tail is |q1 - q2| / (2^p - 1).
        const auto raw = [&](double d) { return (f.eval(t) - f.eval(t - d)) / std::pow(d, a.to_double()); };
        const double d = 1e-6;
        const double q1 = raw(d), q2 = raw(2 * d);
        const double p = a.is_one() ? 1.0 : 1.0 - a.to_double();
        const double raw_err = 1.5 * std::fabs(q1 - q2) / (std::pow(2.0, p) - 1.0) + 1e-8;
        EXPECT_NEAR(r.value, q1, raw_err + r.error_estimate) << f.to_string() << " t=" << t << " a=" << a.to_string();
    }
}

// ---- higher order ---------------------------------------------------------

TEST(HigherOrder, SquareOnGridsAtOnePointThree)
{
    for (double h : {0.5, 1.0, 2.0})
        for (double t : {0.0, 3 * h, -h}) {
            const auto r = higher_frac_derivative(parse_expr("t^2"), TimeScale::uniform_grid(h), t,
                                                  HigherOrder(Rational(13, 10)));
            EXPECT_NEAR(r.value, 2 * std::pow(h, 0.7), 1e-12 * 2 * std::pow(h, 0.7)) << "h=" << h;
        }
}

TEST(HigherOrder, ConstantsVanishForEveryOrder)
{
    for (const char* spec : {"Z", "R", "cantor:2", "hZ:1/2"})
        for (Rational b : {Rational(1, 2), Rational(1), Rational(13, 10), Rational(5, 2), Rational(3)})
            EXPECT_EQ(higher_frac_derivative(parse_expr("4"), parse_scale(spec), 1.0 / 3 * (spec[0] == 'c'), HigherOrder(b)).value, 0.0)
                << spec << " " << b.to_string();
}

TEST(HigherOrder, IntegerOrderIsIteratedForwardDifference)
{
    const FnOnScale f = parse_expr("t^2");
    for (int t = -4; t <= 4; ++t) {
        EXPECT_EQ(higher_frac_derivative(f, TimeScale::integers(), t, HigherOrder(Rational(1))).value, 2 * t + 1);
        EXPECT_EQ(higher_frac_derivative(f, TimeScale::integers(), t, HigherOrder(Rational(2))).value, 2);
    }
}

TEST(HigherOrder, OrderZeroIsIdentity)
{
    const auto r = higher_frac_derivative(parse_expr("t^2"), TimeScale::reals(), 3, HigherOrder(Rational(0)));
    EXPECT_EQ(r.value, 9);
    EXPECT_EQ(r.method, Method::IdentityOrder);
}

TEST(HigherOrder, DensePointsUseTheSymbolicDerivative)
{
    // (t^3)^(1 + 1) on R is the classical second derivative 6t.
    const auto r = higher_frac_derivative(parse_expr("t^3"), TimeScale::reals(), 2, HigherOrder(Rational(2)));
    EXPECT_DOUBLE_EQ(r.value, 12);
    EXPECT_EQ(r.method, Method::SymbolicDelta);
    // On [0,1] u {2}, 1 is right-scattered but f^Delta(2) is needed only through sigma(1) = 2 ... which is the max.
    const auto u = TimeScale::finite_union({ClosedInterval{0, 1}, SinglePoint{2}, SinglePoint{3}});
    const auto s = higher_frac_derivative(parse_expr("t^2"), u, 1, HigherOrder(Rational(3, 2)));
    // f^Delta(1) = 3, f^Delta(2) = 5, so (f^Delta)^(1/2)(1) = (5 - 3) / 1^(1/2).
    EXPECT_DOUBLE_EQ(s.value, 2);
}

TEST(HigherOrder, TableBackedDensePathIsUnsupported)
{
    const FnOnScale table = FnOnScale::table({{0.5, 1.0}});
    EXPECT_EQ(code_of([&] {
                  (void)higher_frac_derivative(table, TimeScale::interval(0, 1), 0.5, HigherOrder(Rational(3, 2)));
              }),
              ErrorCode::UnsupportedDensePath);
}

// ---- power rules ----------------------------------------------------------

TEST(PowerRule, Examples)
{
    EXPECT_EQ(power_rule_derivative(2, 0, false, TimeScale::integers(), 4, ord(1, 2)), 9);
    EXPECT_DOUBLE_EQ(power_rule_derivative(1, 0, true, TimeScale::integers(), 2, ord(1, 2)), -1.0 / 6);
    for (double t : {-1.0, 0.0, 2.5}) {
        EXPECT_EQ(power_rule_derivative(3, 0, false, TimeScale::reals(), t, ord(1, 2)), 0);
        EXPECT_NEAR(frac_derivative(parse_expr("t^3"), TimeScale::reals(), t, ord(1, 2)).value, 0, 1e-9);
    }
    EXPECT_EQ(code_of([] { (void)power_rule_derivative(1, 0, true, TimeScale::integers(), -1, ord(1, 2)); }),
              ErrorCode::SingularPoint);
    EXPECT_THROW((void)power_rule_derivative(2, 0, false, TimeScale::integers(), 1, FractionalOrder::one()), Error);
}

TEST(PowerRule, MatchesTheDefinitionAtScatteredPoints)
{
    testsupport::Gen g(61);
    const std::vector<Rational> orders{{1, 3}, {1, 2}, {1, 4}, {2, 3}, {1, 5}, {3, 4}};
    for (const auto& [s, t] : scattered_points()) {
        const FractionalOrder a(g.pick(orders));
        const double c = static_cast<double>(g.integer(-12, 12)) / 4 + 0.125;
        for (int m = 1; m <= 5; ++m) {
            const Expr base = Expr::sub(Expr::var(), Expr::constant(c));
            const double direct = frac_derivative(Expr::pow(base, Rational(m)), s, t, a).value;
            EXPECT_TRUE(rel_near(power_rule_derivative(m, c, false, s, t, a), direct, 1e-12))
                << s.describe() << " t=" << t << " m=" << m;
            const double inv = frac_derivative(Expr::pow(base, Rational(-m)), s, t, a).value;
            EXPECT_TRUE(rel_near(power_rule_derivative(m, c, true, s, t, a), inv, 1e-12))
                << s.describe() << " t=" << t << " m=" << m;
        }
    }
}

// ---- chain rule -----------------------------------------------------------

TEST(ChainRule, Examples)
{
    for (auto a : {ord(1, 3), ord(1, 2), ord(3, 4)})
        EXPECT_NEAR(chain_rule_witness(parse_expr("t^2"), parse_expr("2*t"), TimeScale::integers(), 4, a), 4.5, 1e-9);
    EXPECT_EQ(chain_rule_witness(parse_expr("sin(t)"), parse_expr("3"), TimeScale::integers(), 2, ord(1, 2)), 2);
    // (t^3)^(1/2)(1) on Z is 8 - 1 = 7 = 3 c^2 * 1.
    const double c = chain_rule_witness(parse_expr("t^3"), parse_expr("t"), TimeScale::integers(), 1, ord(1, 2));
    EXPECT_NEAR(c, std::sqrt(7.0 / 3), 1e-9);
    EXPECT_GE(c, 1);
    EXPECT_LE(c, 2);
}

TEST(ChainRule, WitnessSatisfiesTheIdentityOnGrids)
{
    testsupport::Gen g(67);
    for (int i = 0; i < 50; ++i) {
        const double h = g.pick(std::vector<double>{0.5, 1.0, 2.0});
        const auto s = TimeScale::uniform_grid(h);
        const double t = static_cast<double>(g.integer(-4, 4)) * h;
        const Expr f = parse_expr(g.polynomial(3));
        const Expr gg = parse_expr(g.polynomial(2));
        const FractionalOrder a(Rational(g.integer(1, 3), 4));
        double c = 0;
        try {
            c = chain_rule_witness(f, gg, s, t, a);
        } catch (const Error& e) {
            ADD_FAILURE() << e.what() << " f=" << f.to_string() << " g=" << gg.to_string();
            continue;
        }
        EXPECT_GE(c, t - 1e-12);
        EXPECT_LE(c, t + h + 1e-12);
        const double lhs = (f.eval(gg.eval(t + h)) - f.eval(gg.eval(t))) / std::pow(h, a.to_double());
        const double rhs = classical_derivative(f).eval(gg.eval(c)) * (gg.eval(t + h) - gg.eval(t)) / std::pow(h, a.to_double());
        EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::fabs(lhs)));
    }
}
