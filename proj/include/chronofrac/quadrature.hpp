#pragma once

#include <cmath>

namespace chronofrac {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 40;
};

namespace detail {

template <typename Fn>
double simpson_step(Fn& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol || m <= a || m >= b)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] (signed: b < a negates).
template <typename Fn>
double adaptive_simpson(Fn&& f, double a, double b, const QuadratureOptions& opts = {})
{
    if (a == b)
        return 0.0;
    if (b < a)
        return -adaptive_simpson(f, b, a, opts);
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, opts.abs_tol, opts.max_depth);
}

} // namespace chronofrac
