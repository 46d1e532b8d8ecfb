#pragma once

/**
 * @file laws.hpp
 * @brief Executable residual checks for the calculus identities.
 *
 * Each check evaluates both sides of an identity and records a scaled residual
 *
 *     |lhs - rhs| / max(1, magnitude)
 *
 * where magnitude is the largest term that entered the comparison, so that a
 * residual measures rounding relative to the numbers actually involved.
 *
 * Cases are split by regime: a case is "scattered" when every evaluation is a
 * closed form (no limits, no quadrature) and must reach 1e-12; otherwise it is
 * "dense" and must reach 1e-5.
 */

#include "chronofrac/error.hpp"
#include "chronofrac/expr.hpp"
#include "chronofrac/fracderiv.hpp"
#include "chronofrac/function.hpp"
#include "chronofrac/integral.hpp"
#include "chronofrac/order.hpp"
#include "chronofrac/report_io.hpp"
#include "chronofrac/scale_dsl.hpp"
#include "chronofrac/timescale.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace chronofrac {

inline constexpr double kScatteredThreshold = 1e-12;
inline constexpr double kDenseThreshold = 1e-5;

enum class Regime { Scattered, Dense };

constexpr std::string_view to_string(Regime r) noexcept { return r == Regime::Scattered ? "scattered" : "dense"; }

constexpr double threshold_for(Regime r) noexcept
{
    return r == Regime::Scattered ? kScatteredThreshold : kDenseThreshold;
}

struct LawReport {
    std::string law_id;
    Regime regime = Regime::Scattered;
    double threshold = kScatteredThreshold;
    int cases_run = 0;
    double max_residual = 0.0;
    std::string worst_case;
    double max_error_estimate = 0.0; // largest limit-engine error estimate seen
    int case_errors = 0;
    std::string first_error;
    bool passed = true;

    void record(double residual, const std::string& description, double error_estimate = 0.0)
    {
        ++cases_run;
        max_error_estimate = std::max(max_error_estimate, error_estimate);
        if (cases_run == 1 || residual > max_residual || std::isnan(residual)) {
            max_residual = residual;
            worst_case = description;
        }
        passed = max_residual <= threshold;
    }

    void record_error(const std::string& message)
    {
        if (case_errors++ == 0)
            first_error = message;
    }

    std::string to_json() const
    {
        return JsonLine()
            .field("law", law_id)
            .field("regime", to_string(regime))
            .field("threshold", threshold)
            .field("cases_run", cases_run)
            .field("max_residual", max_residual)
            .field("worst_case", worst_case)
            .field("max_error_estimate", max_error_estimate)
            .field("case_errors", case_errors)
            .field("first_error", first_error)
            .field("passed", passed)
            .str();
    }
};

inline double scaled_residual(double lhs, double rhs, std::initializer_list<double> magnitudes)
{
    double m = 1.0;
    for (double x : magnitudes)
        m = std::max(m, std::fabs(x));
    m = std::max({m, std::fabs(lhs), std::fabs(rhs)});
    return std::fabs(lhs - rhs) / m;
}

inline Regime regime_at(const TimeScale& scale, double t)
{
    return scale.graininess(t) > 0.0 ? Regime::Scattered : Regime::Dense;
}

namespace detail {

inline LawReport single_case(std::string law, Regime regime, double residual, const std::string& description,
                             double error_estimate = 0.0)
{
    LawReport r;
    r.law_id = std::move(law);
    r.regime = regime;
    r.threshold = threshold_for(regime);
    r.record(residual, description, error_estimate);
    return r;
}

// Collects the largest error estimate over the derivative evaluations of one case.
struct ErrorTracker {
    double worst = 0.0;
    double operator()(const DerivResult& d)
    {
        worst = std::max(worst, d.error_estimate);
        return d.value;
    }
};

inline std::string describe_case(const TimeScale& scale, double t, const FractionalOrder& alpha,
                                 std::initializer_list<const FnOnScale*> fns)
{
    std::string s = "scale=" + scale.describe() + " t=" + shortest_repr(t) + " alpha=" + alpha.to_string();
    char name = 'f';
    for (const auto* f : fns) {
        s += std::string(" ") + name + "=" + f->describe();
        ++name;
    }
    return s;
}

// Magnitude of a forward-difference quotient's ingredients.
inline double quotient_scale(const TimeScale& scale, double t, const FractionalOrder& alpha,
                             std::initializer_list<double> values)
{
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::fabs(v));
    const double mu = scale.graininess(t);
    return mu > 0.0 ? m / rpow(mu, alpha) : m;
}

inline Expr expr_of(const FnOnScale& f)
{
    if (const Expr* e = f.expr())
        return *e;
    throw Error(ErrorCode::InvalidArgument, "law checks combine functions symbolically and need closed forms");
}

} // namespace detail

/// Simple useful formula: f(sigma(t)) = f(t) + mu(t)^alpha f^(alpha)(t).
inline LawReport check_simple_useful_formula(const FnOnScale& f, const TimeScale& scale, double t,
                                             const FractionalOrder& alpha, const LimitOptions& opts = {})
{
    detail::ErrorTracker track;
    const DerivResult d = frac_derivative(f, scale, t, alpha, opts);
    track(d);
    const double mu = scale.graininess(t);
    const double fs = f(scale.sigma(t));
    const double ft = f(t);
    const double jump = mu > 0.0 ? rpow(mu, alpha) * d.value : 0.0;
    const double rhs = ft + jump;
    return detail::single_case("simple_useful_formula", regime_at(scale, t),
                               scaled_residual(fs, rhs, {ft, jump}), detail::describe_case(scale, t, alpha, {&f}),
                               track.worst);
}

/// (f + g)^(alpha) = f^(alpha) + g^(alpha).
inline LawReport check_sum_rule(const FnOnScale& f, const FnOnScale& g, const TimeScale& scale, double t,
                                const FractionalOrder& alpha, const LimitOptions& opts = {}, double fault = 0.0)
{
    detail::ErrorTracker track;
    const FnOnScale sum = Expr::add(detail::expr_of(f), detail::expr_of(g));
    const double lhs = track(frac_derivative(sum, scale, t, alpha, opts)) + fault;
    const double df = track(frac_derivative(f, scale, t, alpha, opts));
    const double dg = track(frac_derivative(g, scale, t, alpha, opts));
    const double sig = scale.sigma(t);
    const double mag = detail::quotient_scale(scale, t, alpha, {f(t), f(sig), g(t), g(sig)});
    return detail::single_case("sum_rule", regime_at(scale, t), scaled_residual(lhs, df + dg, {df, dg, mag}),
                               detail::describe_case(scale, t, alpha, {&f, &g}), track.worst);
}

/// (lambda f)^(alpha) = lambda f^(alpha).
inline LawReport check_scalar_rule(const FnOnScale& f, double lambda, const TimeScale& scale, double t,
                                   const FractionalOrder& alpha, const LimitOptions& opts = {})
{
    detail::ErrorTracker track;
    const FnOnScale scaled = Expr::mul(Expr::constant(lambda), detail::expr_of(f));
    const double lhs = track(frac_derivative(scaled, scale, t, alpha, opts));
    const double df = track(frac_derivative(f, scale, t, alpha, opts));
    const double mag = std::fabs(lambda) * detail::quotient_scale(scale, t, alpha, {f(t), f(scale.sigma(t))});
    return detail::single_case("scalar_rule", regime_at(scale, t), scaled_residual(lhs, lambda * df, {mag}),
                               detail::describe_case(scale, t, alpha, {&f}) + " lambda=" + shortest_repr(lambda), track.worst);
}

/// (fg)^(alpha) = f^(alpha) g + f^sigma g^(alpha) = f^(alpha) g^sigma + f g^(alpha).
/// The residual is the worst of the three pairwise comparisons.
inline LawReport check_product_rule(const FnOnScale& f, const FnOnScale& g, const TimeScale& scale, double t,
                                    const FractionalOrder& alpha, const LimitOptions& opts = {})
{
    detail::ErrorTracker track;
    const FnOnScale product = Expr::mul(detail::expr_of(f), detail::expr_of(g));
    const double lhs = track(frac_derivative(product, scale, t, alpha, opts));
    const double df = track(frac_derivative(f, scale, t, alpha, opts));
    const double dg = track(frac_derivative(g, scale, t, alpha, opts));
    const double sig = scale.sigma(t);
    const double ft = f(t), fs = f(sig), gt = g(t), gs = g(sig);
    const double form1 = df * gt + fs * dg;
    const double form2 = df * gs + ft * dg;
    const double mag = std::max({detail::quotient_scale(scale, t, alpha, {ft * gt, fs * gs, fs * gt, ft * gs}),
                                 std::fabs(df * gt), std::fabs(fs * dg), std::fabs(df * gs), std::fabs(ft * dg)});
    const double residual = std::max({scaled_residual(lhs, form1, {mag}), scaled_residual(lhs, form2, {mag}),
                                      scaled_residual(form1, form2, {mag})});
    return detail::single_case("product_rule", regime_at(scale, t), residual,
                               detail::describe_case(scale, t, alpha, {&f, &g}), track.worst);
}

/**
 * Reciprocal rule (1/g)^(alpha) = -g^(alpha) / (g g^sigma) and quotient rule
 * (f/g)^(alpha) = (f^(alpha) g - f g^(alpha)) / (g g^sigma). Both residuals are
 * folded into one report per law id; SingularPoint when g(t) g(sigma(t)) = 0.
 */
inline std::array<LawReport, 2> check_quotient_rules(const FnOnScale& f, const FnOnScale& g, const TimeScale& scale,
                                                     double t, const FractionalOrder& alpha,
                                                     const LimitOptions& opts = {})
{
    detail::ErrorTracker track;
    const double sig = scale.sigma(t);
    const double gt = g(t), gs = g(sig);
    if (gt * gs == 0.0)
        throw Error(ErrorCode::SingularPoint, "g(t) g(sigma(t)) = 0 at t = " + shortest_repr(t));
    const Expr fe = detail::expr_of(f);
    const Expr ge = detail::expr_of(g);
    const double df = track(frac_derivative(f, scale, t, alpha, opts));
    const double dg = track(frac_derivative(g, scale, t, alpha, opts));
    const double ft = f(t), fs = f(sig);
    const std::string desc = detail::describe_case(scale, t, alpha, {&f, &g});
    const Regime regime = regime_at(scale, t);

    const FnOnScale reciprocal = Expr::div(Expr::constant(Rational(1)), ge);
    const double rec = track(frac_derivative(reciprocal, scale, t, alpha, opts));
    const double rec_rhs = -dg / (gt * gs);
    const double rec_mag = detail::quotient_scale(scale, t, alpha, {1.0 / gt, 1.0 / gs});

    const FnOnScale quotient = Expr::div(fe, ge);
    const double quo = track(frac_derivative(quotient, scale, t, alpha, opts));
    const double quo_rhs = (df * gt - ft * dg) / (gt * gs);
    const double quo_mag = std::max({detail::quotient_scale(scale, t, alpha, {ft / gt, fs / gs}),
                                     std::fabs(df * gt / (gt * gs)), std::fabs(ft * dg / (gt * gs))});

    return {detail::single_case("reciprocal_rule", regime, scaled_residual(rec, rec_rhs, {rec_mag}), desc, track.worst),
            detail::single_case("quotient_rule", regime, scaled_residual(quo, quo_rhs, {quo_mag}), desc, track.worst)};
}

/// Closed-form power rule against the generic derivative of (t - c)^m or (t - c)^-m.
inline LawReport check_power_rule(int m, double c, bool inverted, const TimeScale& scale, double t,
                                  const FractionalOrder& alpha, const LimitOptions& opts = {})
{
    detail::ErrorTracker track;
    const Expr base = Expr::sub(Expr::var(), Expr::constant(c));
    const FnOnScale f = inverted ? Expr::pow(base, Rational(-m)) : Expr::pow(base, Rational(m));
    const double closed = power_rule_derivative(m, c, inverted, scale, t, alpha);
    const double generic = track(frac_derivative(f, scale, t, alpha, opts));
    const double mag = detail::quotient_scale(scale, t, alpha, {f(t), f(scale.sigma(t))});
    return detail::single_case(inverted ? "inverse_power_rule" : "power_rule", regime_at(scale, t),
                               scaled_residual(closed, generic, {mag}),
                               detail::describe_case(scale, t, alpha, {&f}) + " m=" + std::to_string(m), track.worst);
}

/// Residuals of the five integral properties for one (f, g, a, b, c, xi, beta) draw.
struct IntegralLawResiduals {
    std::array<double, 5> residual{}; // additivity, homogeneity, antisymmetry, splitting, zero length
    Regime regime = Regime::Scattered;
};

inline IntegralLawResiduals integral_law_residuals(const FnOnScale& f, const FnOnScale& g, const TimeScale& scale,
                                                   double a, double b, double c, double xi, const Rational& beta,
                                                   Window window, const LimitOptions& opts = {})
{
    const Expr fe = detail::expr_of(f);
    const Expr ge = detail::expr_of(g);
    const auto fb = frac_indefinite_integral(f, scale, beta, window, std::nullopt, opts);
    const auto gb = frac_indefinite_integral(g, scale, beta, window, std::nullopt, opts);
    const auto sb = frac_indefinite_integral(Expr::add(fe, ge), scale, beta, window, std::nullopt, opts);
    const auto xb = frac_indefinite_integral(Expr::mul(Expr::constant(xi), fe), scale, beta, window, std::nullopt, opts);

    const double fa = fb(a), fbv = fb(b), fc = fb(c);
    const double ga = gb(a), gbv = gb(b);
    const double i_f = fbv - fa;
    const double i_g = gbv - ga;
    const double i_s = sb(b) - sb(a);
    const double i_x = xb(b) - xb(a);

    IntegralLawResiduals r;
    r.residual[0] = scaled_residual(i_s, i_f + i_g, {fa, fbv, ga, gbv});
    r.residual[1] = scaled_residual(i_x, xi * i_f, {xi * fa, xi * fbv});
    r.residual[2] = std::fabs(cauchy_frac_integral(fb, a, b) + cauchy_frac_integral(fb, b, a));
    r.residual[3] = scaled_residual(cauchy_frac_integral(fb, a, b),
                                    cauchy_frac_integral(fb, a, c) + cauchy_frac_integral(fb, c, b), {fa, fbv, fc});
    r.residual[4] = std::fabs(cauchy_frac_integral(fb, a, a));

    bool exact = true;
    for (double x : {a, b, c})
        exact = exact && scale.graininess(x) > 0.0;
    if (exact && beta == Rational(1)) {
        const auto& pieces = fb.antiderivative().pieces();
        exact = std::none_of(pieces.begin(), pieces.end(), [](const Piece& p) { return p.dense; });
    }
    r.regime = exact ? Regime::Scattered : Regime::Dense;
    return r;
}

inline const std::array<std::string, 5>& integral_law_ids()
{
    static const std::array<std::string, 5> ids{"integral_additivity", "integral_homogeneity", "integral_antisymmetry",
                                                "integral_splitting", "integral_zero_length"};
    return ids;
}

/// All five integral properties folded into one report.
inline LawReport check_integral_laws(const FnOnScale& f, const FnOnScale& g, const TimeScale& scale, double a,
                                     double b, double c, double xi, const Rational& beta, Window window,
                                     const LimitOptions& opts = {})
{
    const auto r = integral_law_residuals(f, g, scale, a, b, c, xi, beta, window, opts);
    const double worst = *std::max_element(r.residual.begin(), r.residual.end());
    return detail::single_case("integral_laws", r.regime, worst,
                               "scale=" + scale.describe() + " a=" + shortest_repr(a) + " b=" + shortest_repr(b) +
                                   " c=" + shortest_repr(c) + " xi=" + shortest_repr(xi) + " beta=" +
                                   beta.to_string() + " f=" + f.describe() + " g=" + g.describe());
}

// ---------------------------------------------------------------------------
// Randomized suite
// ---------------------------------------------------------------------------

struct LawSuiteOptions {
    std::uint64_t seed = 1;
    int cases = 200;
    std::vector<std::string> scale_pool{"Z", "hZ:1/2", "hZ:2@1", "union:{[0,1],{3/2},[2,3],{4},{5}}", "cantor:3", "R"};
    std::vector<Rational> order_pool{Rational(1, 3), Rational(1, 2), Rational(1, 4), Rational(2, 3),
                                     Rational(1, 5), Rational(3, 4), Rational(1)};
    std::vector<Rational> integral_order_pool{Rational(0), Rational(1, 4), Rational(1, 3),
                                              Rational(1, 2), Rational(2, 3), Rational(1)};
    LimitOptions limit;
    /// Test hook: perturbs one side of the sum rule so the suite must fail.
    bool inject_fault = false;
};

namespace detail {

// Deterministic draws built on the raw mt19937_64 stream, whose output is fixed by
// the standard (unlike the distribution adaptors).
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(rng_() % span);
    }
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    template <typename T>
    const T& pick(const std::vector<T>& v)
    {
        return v[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

private:
    std::mt19937_64 rng_;
};

// Window of the scale in which points are drawn.
inline Window sampling_window(const TimeScale& scale)
{
    if (scale.is_cantor())
        return {0.0, 1.0};
    if (auto lo = scale.min(); lo && scale.max())
        return {*lo, *scale.max()};
    return {-6.0, 6.0};
}

inline double draw_point(Draw& d, const TimeScale& scale)
{
    const Window w = sampling_window(scale);
    return std::visit([&](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, TimeScale::Reals>) {
            return static_cast<double>(d.integer(-256, 256)) / 64.0;
        } else if constexpr (std::is_same_v<V, TimeScale::UniformGrid>) {
            return v.anchor + static_cast<double>(d.integer(-8, 8)) * v.h;
        } else if constexpr (std::is_same_v<V, TimeScale::CantorApprox>) {
            const std::int64_t count = TimeScale::pow3(v.depth);
            std::int64_t k = 0;
            for (std::int64_t place = count / 3; place >= 1; place /= 3)
                k += 2 * d.integer(0, 1) * place;
            const double a = static_cast<double>(k) / static_cast<double>(count);
            const double b = static_cast<double>(k + 1) / static_cast<double>(count);
            switch (d.integer(0, 2)) {
            case 0: return b;
            case 1: return a;
            default: return a + (b - a) * static_cast<double>(d.integer(1, 7)) / 8.0;
            }
        } else {
            const auto& c = v.components[static_cast<std::size_t>(d.integer(0, static_cast<std::int64_t>(v.components.size()) - 1))];
            if (const auto* iv = std::get_if<ClosedInterval>(&c)) {
                switch (d.integer(0, 2)) {
                case 0: return iv->b;
                case 1: return iv->a;
                default: return iv->a + (iv->b - iv->a) * static_cast<double>(d.integer(1, 7)) / 8.0;
                }
            }
            (void)w;
            return std::get<SinglePoint>(c).p;
        }
    }, scale.variant());
}

// Whether f^(alpha)(t) is defined for every function: t in T^kappa with the
// required approach available at dense points.
inline bool derivable(const TimeScale& scale, double t, const FractionalOrder& alpha)
{
    if (!scale.contains(t) || !scale.in_kappa(t))
        return false;
    if (scale.graininess(t) > 0.0)
        return true;
    const auto c = scale.classify(t);
    return alpha.odd_reciprocal() ? (c.left_dense() || c.right_dense()) : c.left_dense();
}

inline Expr draw_polynomial(Draw& d, int max_degree = 4)
{
    const int degree = static_cast<int>(d.integer(0, max_degree));
    Expr e = Expr::constant(Rational(d.integer(-3, 3)));
    for (int k = 1; k <= degree; ++k) {
        std::int64_t coeff = d.integer(-3, 3);
        if (k == degree && coeff == 0)
            coeff = 1;
        e = Expr::add(e, Expr::mul(Expr::constant(Rational(coeff)), Expr::pow(Expr::var(), Rational(k))));
    }
    return e;
}

// Polynomial, or a reciprocal 1/(t - c)^m whose pole sits at c.
inline Expr draw_function(Draw& d, double& pole, bool& has_pole)
{
    has_pole = d.integer(0, 3) == 0;
    if (!has_pole)
        return draw_polynomial(d);
    pole = static_cast<double>(d.integer(-24, 24)) / 4.0 + 0.125;
    const int m = static_cast<int>(d.integer(1, 2));
    return Expr::div(Expr::constant(Rational(d.integer(1, 3))),
                     Expr::pow(Expr::sub(Expr::var(), Expr::constant(pole)), Rational(m)));
}

// Evaluation points a derivative at t may touch.
inline std::vector<double> probe_points(const TimeScale& scale, double t, const LimitOptions& opts)
{
    std::vector<double> pts{t, scale.sigma(t)};
    if (scale.graininess(t) == 0.0) {
        const auto approach = scale.approach_points(t, Side::both, opts.max_samples, opts.delta0, opts.bounds, opts.ratio);
        pts.insert(pts.end(), approach.begin(), approach.end());
    }
    return pts;
}

inline bool away_from(const std::vector<double>& pts, double pole, double margin)
{
    return std::all_of(pts.begin(), pts.end(), [&](double x) { return std::fabs(x - pole) > margin; });
}

// Rejects functions that come within `margin` of zero on the probe points or change
// sign between them (a root in between is a pole of 1/g).
inline bool bounded_away_from_zero(const Expr& g, const std::vector<double>& pts, double margin)
{
    try {
        const double sign = std::copysign(1.0, g.eval(pts.front()));
        return std::all_of(pts.begin(), pts.end(), [&](double x) { return sign * g.eval(x) > margin; });
    } catch (const Error&) {
        return false;
    }
}

inline void merge(std::vector<LawReport>& out, const LawReport& r)
{
    for (auto& existing : out) {
        if (existing.law_id == r.law_id && existing.regime == r.regime) {
            if (r.cases_run > 0 &&
                (existing.cases_run == 0 || r.max_residual > existing.max_residual || std::isnan(r.max_residual))) {
                existing.max_residual = r.max_residual;
                existing.worst_case = r.worst_case;
            }
            existing.cases_run += r.cases_run;
            existing.max_error_estimate = std::max(existing.max_error_estimate, r.max_error_estimate);
            if (existing.case_errors == 0 && r.case_errors > 0)
                existing.first_error = r.first_error;
            existing.case_errors += r.case_errors;
            existing.passed = existing.max_residual <= existing.threshold;
            return;
        }
    }
    out.push_back(r);
}

} // namespace detail

/**
 * Runs every law over `cases` randomized draws each. Reports are emitted per
 * (law, regime) in a fixed order; individual case failures are counted in
 * case_errors instead of aborting the run.
 */
inline std::vector<LawReport> run_randomized_suite(const LawSuiteOptions& opts)
{
    if (opts.cases <= 0)
        throw Error(ErrorCode::InvalidArgument, "cases_run must be positive");
    if (opts.scale_pool.empty() || opts.order_pool.empty() || opts.integral_order_pool.empty())
        throw Error(ErrorCode::InvalidArgument, "scale and order pools must be nonempty");

    std::vector<TimeScale> scales;
    for (const auto& s : opts.scale_pool)
        scales.push_back(parse_scale(s));

    const std::vector<std::string> derivative_laws{"simple_useful_formula", "sum_rule", "scalar_rule", "product_rule",
                                                   "reciprocal_rule", "quotient_rule", "power_rule",
                                                   "inverse_power_rule"};
    std::vector<LawReport> reports;
    // Fixed report order: every law, scattered before dense.
    auto seed_reports = [&](const std::string& id) {
        for (Regime r : {Regime::Scattered, Regime::Dense}) {
            LawReport rep;
            rep.law_id = id;
            rep.regime = r;
            rep.threshold = threshold_for(r);
            reports.push_back(rep);
        }
    };
    for (const auto& id : derivative_laws)
        seed_reports(id);
    for (const auto& id : integral_law_ids())
        seed_reports(id);

    auto fail = [&](const std::string& law, Regime regime, const std::string& what) {
        LawReport r;
        r.law_id = law;
        r.regime = regime;
        r.threshold = threshold_for(regime);
        r.passed = true;
        r.record_error(what);
        detail::merge(reports, r);
    };

    for (std::size_t law = 0; law < derivative_laws.size(); ++law) {
        const std::string& id = derivative_laws[law];
        detail::Draw d(opts.seed * 1'000'003ULL + law);
        const bool power = id == "power_rule" || id == "inverse_power_rule";
        for (int i = 0; i < opts.cases; ++i) {
            const TimeScale* scale = nullptr;
            double t = 0.0;
            std::optional<FractionalOrder> alpha;
            Expr f = Expr::var(), g = Expr::var();
            int m = 1;
            double c = 0.0;
            double lambda = 1.0;
            bool ok = false;
            for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
                scale = &scales[static_cast<std::size_t>(i) % scales.size()];
                t = detail::draw_point(d, *scale);
                const Rational& order = d.pick(opts.order_pool);
                if (power && order == Rational(1))
                    continue;
                alpha.emplace(order);
                if (!detail::derivable(*scale, t, *alpha))
                    continue;
                const auto probes = detail::probe_points(*scale, t, opts.limit);
                if (power) {
                    m = static_cast<int>(d.integer(1, 5));
                    c = static_cast<double>(d.integer(-12, 12)) / 4.0 + 0.125;
                    ok = id == "power_rule" || detail::away_from(probes, c, 0.25);
                    continue;
                }
                double pole_f = 0.0, pole_g = 0.0;
                bool has_f = false, has_g = false;
                f = detail::draw_function(d, pole_f, has_f);
                g = detail::draw_function(d, pole_g, has_g);
                if ((has_f && !detail::away_from(probes, pole_f, 0.25)) ||
                    (has_g && !detail::away_from(probes, pole_g, 0.25)))
                    continue;
                lambda = static_cast<double>(d.integer(-12, 12)) / 4.0;
                if (id == "reciprocal_rule" || id == "quotient_rule")
                    ok = detail::bounded_away_from_zero(g, probes, 1e-3);
                else
                    ok = true;
            }
            if (!ok) {
                fail(id, Regime::Scattered, "could not draw an admissible case");
                continue;
            }
            const Regime regime = regime_at(*scale, t);
            try {
                LawReport r;
                if (id == "simple_useful_formula")
                    r = check_simple_useful_formula(f, *scale, t, *alpha, opts.limit);
                else if (id == "sum_rule")
                    r = check_sum_rule(f, g, *scale, t, *alpha, opts.limit, opts.inject_fault ? 1e-3 : 0.0);
                else if (id == "scalar_rule")
                    r = check_scalar_rule(f, lambda, *scale, t, *alpha, opts.limit);
                else if (id == "product_rule")
                    r = check_product_rule(f, g, *scale, t, *alpha, opts.limit);
                else if (id == "reciprocal_rule")
                    r = check_quotient_rules(f, g, *scale, t, *alpha, opts.limit)[0];
                else if (id == "quotient_rule")
                    r = check_quotient_rules(f, g, *scale, t, *alpha, opts.limit)[1];
                else
                    r = check_power_rule(m, c, id == "inverse_power_rule", *scale, t, *alpha, opts.limit);
                detail::merge(reports, r);
            } catch (const Error& e) {
                const FnOnScale fd = f, gd = g;
                const std::string desc = power ? detail::describe_case(*scale, t, *alpha, {}) + " m=" +
                                                     std::to_string(m) + " c=" + shortest_repr(c)
                                               : detail::describe_case(*scale, t, *alpha, {&fd, &gd});
                fail(id, regime, desc + ": " + e.what());
            }
        }
    }

    {
        detail::Draw d(opts.seed * 1'000'003ULL + derivative_laws.size());
        for (int i = 0; i < opts.cases; ++i) {
            const TimeScale& scale = scales[static_cast<std::size_t>(i) % scales.size()];
            const Window window = detail::sampling_window(scale);
            std::array<double, 3> pts{};
            bool ok = false;
            for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
                ok = true;
                for (auto& p : pts) {
                    p = detail::draw_point(d, scale);
                    // Integral endpoints need F^beta, which needs a left approach at dense points.
                    ok = ok && p > window.lo && p < window.hi && scale.contains(p) && scale.in_kappa(p) &&
                         (scale.graininess(p) > 0.0 || scale.classify(p).left_dense());
                }
            }
            std::sort(pts.begin(), pts.end());
            const double a = pts[0], c = pts[1], b = pts[2];
            const Rational& beta = d.pick(opts.integral_order_pool);
            const Expr f = detail::draw_polynomial(d);
            const Expr g = detail::draw_polynomial(d);
            const double xi = static_cast<double>(d.integer(-12, 12)) / 4.0;
            const bool swap = d.integer(0, 1) == 1;
            const std::string desc = "scale=" + scale.describe() + " a=" + shortest_repr(swap ? b : a) +
                                     " b=" + shortest_repr(swap ? a : b) + " c=" + shortest_repr(c) +
                                     " beta=" + beta.to_string() + " f=" + f.to_string() + " g=" + g.to_string();
            if (!ok) {
                fail(integral_law_ids()[0], Regime::Scattered, "could not draw an admissible case");
                continue;
            }
            try {
                const auto r = integral_law_residuals(f, g, scale, swap ? b : a, swap ? a : b, c, xi, beta, window,
                                                      opts.limit);
                for (std::size_t k = 0; k < 5; ++k)
                    detail::merge(reports, detail::single_case(integral_law_ids()[k], r.regime, r.residual[k], desc));
            } catch (const Error& e) {
                for (const auto& id : integral_law_ids())
                    fail(id, Regime::Dense, desc + ": " + e.what());
            }
        }
    }

    // Drop regimes that saw no cases at all.
    std::erase_if(reports, [](const LawReport& r) { return r.cases_run == 0 && r.case_errors == 0; });
    return reports;
}

inline bool all_passed(const std::vector<LawReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const LawReport& r) { return r.passed; });
}

} // namespace chronofrac
