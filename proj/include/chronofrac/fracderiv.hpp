#pragma once

/**
 * @file fracderiv.hpp
 * @brief Local fractional derivatives of order alpha in (0, 1] on a time scale.
 *
 * At a right-scattered point the derivative is the closed form
 *
 *     f^(alpha)(t) = (f(sigma(t)) - f(t)) / mu(t)^alpha
 *
 * and at a right-dense point it is the limit of (f(t) - f(s)) / (t - s)^alpha as
 * s -> t through the scale: two-sided when alpha = 1/q with q odd, from the left
 * otherwise. Limits are estimated on a geometric mesh of approach points with
 * Richardson extrapolation in the offsets (see limit_quotient).
 */

#include "chronofrac/error.hpp"
#include "chronofrac/expr.hpp"
#include "chronofrac/function.hpp"
#include "chronofrac/order.hpp"
#include "chronofrac/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chronofrac {

enum class Method { ClosedFormScattered, TwoSidedLimit, LeftLimit, SymbolicDelta, IdentityOrder };

constexpr std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::ClosedFormScattered: return "ClosedFormScattered";
    case Method::TwoSidedLimit: return "TwoSidedLimit";
    case Method::LeftLimit: return "LeftLimit";
    case Method::SymbolicDelta: return "SymbolicDelta";
    case Method::IdentityOrder: return "IdentityOrder";
    }
    return "?";
}

struct DerivResult {
    double value = 0.0;
    Method method = Method::ClosedFormScattered;
    double error_estimate = 0.0;
    int samples_used = 0;
};

struct LimitOptions {
    std::optional<double> delta0; // default max(|t|, 1) / 16
    double ratio = 0.5;
    int max_samples = 64;
    double tol = 1e-9;
    /// Approach points are drawn from T ∩ [lo, hi] when set.
    std::optional<std::pair<double, double>> bounds;
    /// Overrides the side implied by the order.
    std::optional<Side> side;
};

namespace detail {

struct OneSided {
    bool empty = true;
    bool converged = false;
    double value = 0.0;
    double error = 0.0;
    double magnitude = 0.0; // largest of |estimate| and the last |raw quotient|
    int samples = 0;
};

// Generalized Richardson step: fits q(d) = c0 + sum_k c_k d^(k - alpha) through the
// last few (offset, quotient) pairs and returns c0. The exponents are those of a
// smooth numerator (k - alpha, skipping 0 when alpha = 1); a constant sequence is
// reproduced exactly for any exponents.
inline double richardson(const double* d, const double* q, int n, double alpha)
{
    constexpr int kMax = 4;
    n = std::min(n, kMax);
    if (n == 1)
        return q[0];
    double a[kMax][kMax + 1];
    const double unit = d[n - 1];
    const int shift = alpha == 1.0 ? 1 : 0;
    for (int i = 0; i < n; ++i) {
        const double x = d[i] / unit;
        a[i][0] = 1.0;
        for (int k = 1; k < n; ++k)
            a[i][k] = std::pow(x, k + shift - alpha);
        a[i][n] = q[i];
    }
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col]))
                pivot = r;
        if (a[pivot][col] == 0.0)
            return q[n - 1];
        if (pivot != col)
            std::swap(a[pivot], a[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const double factor = a[r][col] / a[col][col];
            for (int k = col; k <= n; ++k)
                a[r][k] -= factor * a[col][k];
        }
    }
    const double c0 = a[0][n] / a[0][0];
    return std::isfinite(c0) ? c0 : q[n - 1];
}

template <typename Numerator>
OneSided one_sided_limit(const TimeScale& scale, double t, Side side, Numerator&& numerator,
                         const FractionalOrder& alpha, const LimitOptions& opts)
{
    OneSided out;
    const auto points = scale.approach_points(t, side, opts.max_samples, opts.delta0, opts.bounds, opts.ratio);
    if (points.empty())
        return out;
    out.empty = false;
    std::vector<double> raw;
    std::vector<double> offsets;
    raw.reserve(points.size());
    offsets.reserve(points.size());
    double previous = 0.0;
    int streak = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const double s = points[j];
        const double q = numerator(s) / rpow(t - s, alpha);
        if (!std::isfinite(q))
            break;
        raw.push_back(q);
        offsets.push_back(std::fabs(t - s));
        const int n = static_cast<int>(std::min<std::size_t>(raw.size(), 4));
        const double x = richardson(offsets.data() + raw.size() - n, raw.data() + raw.size() - n, n, alpha.to_double());
        out.samples = static_cast<int>(j) + 1;
        if (j > 0) {
            const double diff = std::fabs(x - previous);
            // Extrapolation cancels the raw quotient down to x, so its rounding scales with q.
            streak = diff <= opts.tol * std::max({1.0, std::fabs(x), std::fabs(q)}) ? streak + 1 : 0;
            if (streak >= 3) {
                out.converged = true;
                out.value = x;
                out.error = diff;
                out.magnitude = std::max(std::fabs(x), std::fabs(q));
                return out;
            }
        }
        previous = x;
    }
    return out;
}

} // namespace detail

/**
 * Estimates lim numerator(s) / (t - s)^alpha as s -> t through the scale.
 *
 * The side is two-sided for odd-reciprocal orders and left otherwise, unless
 * opts.side says otherwise. A side is converged once three consecutive
 * extrapolated estimates differ by at most tol * max(1, |estimate|, |raw quotient|). In the
 * two-sided case an empty side is skipped; when both sides have points they
 * must each converge and agree within tol.
 */
template <typename Numerator>
DerivResult limit_quotient(const TimeScale& scale, double t, Numerator&& numerator, const FractionalOrder& alpha,
                           const LimitOptions& opts = {})
{
    const Method method = alpha.odd_reciprocal() ? Method::TwoSidedLimit : Method::LeftLimit;
    const Side side = opts.side.value_or(alpha.odd_reciprocal() ? Side::both : Side::left);
    auto diverged = [&](const std::string& which) {
        return Error(ErrorCode::Divergent, which + " quotient at t = " + shortest_repr(t) + " did not converge within " +
                                               std::to_string(opts.max_samples) + " samples");
    };

    if (side != Side::both) {
        const auto r = detail::one_sided_limit(scale, t, side, numerator, alpha, opts);
        if (r.empty)
            throw Error(ErrorCode::NoApproach, "no scale points approach t = " + shortest_repr(t) +
                                                   (side == Side::left ? " from the left" : " from the right"));
        if (!r.converged)
            throw diverged(side == Side::left ? "left" : "right");
        return {r.value, method, r.error, r.samples};
    }

    const auto l = detail::one_sided_limit(scale, t, Side::left, numerator, alpha, opts);
    const auto r = detail::one_sided_limit(scale, t, Side::right, numerator, alpha, opts);
    if (l.empty && r.empty)
        throw Error(ErrorCode::NoApproach, "no scale points approach t = " + shortest_repr(t));
    if (l.empty || r.empty) {
        const auto& only = l.empty ? r : l;
        if (!only.converged)
            throw diverged(l.empty ? "right" : "left");
        return {only.value, method, only.error, only.samples};
    }
    if (!l.converged)
        throw diverged("left");
    if (!r.converged)
        throw diverged("right");
    const double gap = std::fabs(l.value - r.value);
    if (gap > opts.tol * std::max({1.0, l.magnitude, r.magnitude}))
        throw Error(ErrorCode::Divergent, "one-sided limits disagree at t = " + shortest_repr(t) + ": " +
                                              shortest_repr(l.value) + " vs " + shortest_repr(r.value));
    return {0.5 * (l.value + r.value), method, std::max({l.error, r.error, 0.5 * gap}), l.samples + r.samples};
}

/**
 * Fractional derivative from a difference functional diff(a, b) = f(a) - f(b).
 * Callers with a more accurate way to form differences than subtracting two
 * evaluations (antiderivatives, for instance) pass it here directly.
 */
template <typename Diff>
DerivResult fractional_quotient(const TimeScale& scale, double t, const FractionalOrder& alpha, Diff&& diff,
                                const LimitOptions& opts = {})
{
    if (!scale.in_kappa(t))
        throw Error(ErrorCode::NotInKappa, shortest_repr(t) + " is a left-scattered maximum");
    const double mu = scale.graininess(t);
    if (mu > 0.0) {
        const double value = diff(scale.sigma(t), t) / rpow(mu, alpha);
        return {value, Method::ClosedFormScattered, 0.0, 2};
    }

    const PointClass cls = scale.classify(t);
    LimitOptions local = opts;
    if (!local.side) {
        if (alpha.odd_reciprocal()) {
            const bool left = cls.left_dense();
            const bool right = cls.right_dense();
            if (!left && !right)
                throw Error(ErrorCode::NoApproach, shortest_repr(t) + " has no neighbours in the scale");
            local.side = left && right ? Side::both : left ? Side::left : Side::right;
        } else {
            if (!cls.left_dense())
                throw Error(ErrorCode::NoApproach, "order " + alpha.to_string() + " needs a left approach, but " +
                                                       shortest_repr(t) + " is left-scattered or minimal");
            local.side = Side::left;
        }
    }
    return limit_quotient(scale, t, [&](double s) { return diff(t, s); }, alpha, local);
}

/// f^(alpha)(t) for any callable f: double -> double defined on the scale.
template <typename Fn>
DerivResult frac_derivative_of(Fn&& f, const TimeScale& scale, double t, const FractionalOrder& alpha,
                               const LimitOptions& opts = {})
{
    return fractional_quotient(scale, t, alpha, [&](double a, double b) { return f(a) - f(b); }, opts);
}

inline DerivResult frac_derivative(const FnOnScale& f, const TimeScale& scale, double t, const FractionalOrder& alpha,
                                   const LimitOptions& opts = {})
{
    return frac_derivative_of(f, scale, t, alpha, opts);
}

/// The delta (Hilger) derivative: the order-1 case of frac_derivative.
inline DerivResult delta_derivative(const FnOnScale& f, const TimeScale& scale, double t, const LimitOptions& opts = {})
{
    return frac_derivative(f, scale, t, FractionalOrder::one(), opts);
}

namespace detail {

// Iterated delta derivative f^{Δ^n}. Scattered points recurse through sigma;
// dense points fall back to the symbolic classical derivative, which equals the
// delta derivative at right-dense points of a smooth closed-form function.
class IteratedDelta {
public:
    IteratedDelta(const FnOnScale& f, const TimeScale& scale, int n) : f_(f), scale_(scale), n_(n) {}

    double operator()(double s) const { return eval(s, n_); }
    bool used_symbolic() const noexcept { return used_symbolic_; }

private:
    const FnOnScale& f_;
    const TimeScale& scale_;
    int n_;
    mutable std::vector<Expr> derivatives_;
    mutable bool used_symbolic_ = false;

    double eval(double s, int n) const
    {
        if (n == 0)
            return f_(s);
        const double mu = scale_.graininess(s);
        if (mu > 0.0)
            return (eval(scale_.sigma(s), n - 1) - eval(s, n - 1)) / mu;
        if (!scale_.in_kappa(s))
            throw Error(ErrorCode::NotInKappa, shortest_repr(s) + " is a left-scattered maximum");
        const Expr* e = f_.expr();
        if (!e)
            throw Error(ErrorCode::UnsupportedDensePath,
                        "delta derivative of a table-backed function at dense point " + shortest_repr(s));
        if (derivatives_.empty())
            derivatives_.push_back(*e);
        while (static_cast<int>(derivatives_.size()) <= n)
            derivatives_.push_back(classical_derivative(derivatives_.back()));
        used_symbolic_ = true;
        return derivatives_[static_cast<std::size_t>(n)].eval(s);
    }
};

} // namespace detail

/// f^(beta) = (f^{Δ^N})^(alpha) with N = floor(beta), alpha = beta - N; f^(0) = f.
inline DerivResult higher_frac_derivative(const FnOnScale& f, const TimeScale& scale, double t,
                                          const HigherOrder& order, const LimitOptions& opts = {})
{
    const int n = order.integer_part();
    const auto alpha = order.alpha();
    if (!scale.contains(t))
        throw Error(ErrorCode::PointNotInScale, shortest_repr(t) + " is not in " + scale.describe());
    if (n == 0 && !alpha)
        return {f(t), Method::IdentityOrder, 0.0, 1};
    if (n == 0)
        return frac_derivative(f, scale, t, *alpha, opts);

    detail::IteratedDelta g(f, scale, n);
    if (!alpha) {
        if (!scale.in_kappa(t))
            throw Error(ErrorCode::NotInKappa, shortest_repr(t) + " is a left-scattered maximum");
        const double value = g(t);
        return {value, g.used_symbolic() ? Method::SymbolicDelta : Method::ClosedFormScattered, 0.0, 1};
    }
    DerivResult r = frac_derivative_of(g, scale, t, *alpha, opts);
    if (g.used_symbolic() && r.method == Method::ClosedFormScattered)
        r.method = Method::SymbolicDelta;
    return r;
}

/**
 * Closed forms for f(t) = (t - c)^m and, when inverted, 1 / (t - c)^m, valid for
 * alpha < 1:
 *
 *     mu^(1-alpha) * sum_{v=0}^{m-1} (sigma - c)^v (t - c)^(m-1-v)
 *    -mu^(1-alpha) * sum_{v=0}^{m-1} 1 / ((sigma - c)^(m-v) (t - c)^(v+1))
 */
inline double power_rule_derivative(int m, double c, bool inverted, const TimeScale& scale, double t,
                                    const FractionalOrder& alpha)
{
    if (m < 1)
        throw Error(ErrorCode::InvalidArgument, "power must be a positive integer");
    if (alpha.is_one())
        throw Error(ErrorCode::InvalidArgument, "power rule closed form requires alpha < 1");
    if (!scale.in_kappa(t))
        throw Error(ErrorCode::NotInKappa, shortest_repr(t) + " is a left-scattered maximum");
    const double mu = scale.graininess(t);
    const double sig = scale.sigma(t);
    const double x = t - c;
    const double y = sig - c;
    if (inverted && x * y == 0.0)
        throw Error(ErrorCode::SingularPoint, "(t - c)(sigma(t) - c) = 0 at t = " + shortest_repr(t));
    const double factor = mu > 0.0 ? rpow(mu, FractionalOrder(Rational(1) - alpha.value())) : 0.0;
    double sum = 0.0;
    for (int v = 0; v < m; ++v) {
        if (inverted)
            sum += 1.0 / (detail::integer_power(y, m - v) * detail::integer_power(x, v + 1));
        else
            sum += detail::integer_power(y, v) * detail::integer_power(x, m - 1 - v);
    }
    return inverted ? -factor * sum : factor * sum;
}

/**
 * Returns c in [t, sigma(t)] with (f∘g)^(alpha)(t) = f'(g(c)) g^(alpha)(t).
 *
 * The witness is located by bisection on h(c) = f'(g(c)) g^(alpha)(t) - (f∘g)^(alpha)(t),
 * refined to the resolution of doubles; a sign change is first sought at the
 * endpoints, then on a uniform scan of the interval. When both sides vanish the
 * witness is t itself.
 */
inline double chain_rule_witness(const Expr& f, const FnOnScale& g, const TimeScale& scale, double t,
                                 const FractionalOrder& alpha, const LimitOptions& opts = {})
{
    if (alpha.is_one())
        throw Error(ErrorCode::InvalidArgument, "chain rule witness requires alpha < 1");
    const Expr fprime = classical_derivative(f);
    const DerivResult lhs = frac_derivative_of([&](double s) { return f.eval(g(s)); }, scale, t, alpha, opts);
    const DerivResult ga = frac_derivative(g, scale, t, alpha, opts);

    const double tol = std::max(1e-9 * std::max(1.0, std::fabs(lhs.value)), lhs.error_estimate + ga.error_estimate);
    if (std::fabs(lhs.value) <= tol && std::fabs(ga.value) <= tol)
        return t;

    auto h = [&](double c) { return fprime.eval(g(c)) * ga.value - lhs.value; };
    const double right = scale.sigma(t);
    if (right == t) {
        if (std::fabs(h(t)) <= tol)
            return t;
        throw Error(ErrorCode::HypothesisViolated, "identity fails at dense point " + shortest_repr(t));
    }

    auto bisect = [&](double a, double b, double ha) {
        for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(a)); ++i) {
            const double mid = 0.5 * (a + b);
            const double hm = h(mid);
            if (hm == 0.0)
                return mid;
            if ((hm < 0.0) == (ha < 0.0)) {
                a = mid;
                ha = hm;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    };
    auto accept = [&](double c) {
        if (std::fabs(h(c)) > tol)
            throw Error(ErrorCode::HypothesisViolated, "bisection residual exceeds tolerance at c = " + shortest_repr(c));
        return c;
    };

    const double ha = h(t);
    const double hb = h(right);
    if (ha == 0.0)
        return t;
    if (hb == 0.0)
        return right;
    if ((ha < 0.0) != (hb < 0.0))
        return accept(bisect(t, right, ha));

    constexpr int kScan = 256;
    double best = t;
    double best_abs = std::fabs(ha);
    double prev_c = t;
    double prev_h = ha;
    for (int i = 1; i <= kScan; ++i) {
        const double c = t + (right - t) * static_cast<double>(i) / kScan;
        const double hc = h(c);
        if (std::fabs(hc) < best_abs) {
            best_abs = std::fabs(hc);
            best = c;
        }
        if ((hc < 0.0) != (prev_h < 0.0))
            return accept(bisect(prev_c, c, prev_h));
        prev_c = c;
        prev_h = hc;
    }
    if (best_abs <= tol)
        return best;
    throw Error(ErrorCode::HypothesisViolated,
                "no c in [" + shortest_repr(t) + ", " + shortest_repr(right) + "] satisfies the chain rule identity");
}

} // namespace chronofrac
