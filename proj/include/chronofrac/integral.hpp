#pragma once

/**
 * @file integral.hpp
 * @brief Delta antiderivatives and fractional integrals of order beta in [0, 1].
 *
 * The indefinite fractional integral of order beta is the (1 - beta)-order
 * fractional derivative of a delta antiderivative F; the Cauchy integral over
 * [a, b] is F^beta(b) - F^beta(a).
 *
 * Note that on a dense stretch of the scale, 0 < beta < 1 makes F^beta vanish
 * for bounded f: the quotient (F(t) - F(s)) / (t - s)^(1-beta) behaves like
 * f(t) (t - s)^beta. The limit engine returns that 0 rather than having it
 * special-cased here.
 */

#include "chronofrac/error.hpp"
#include "chronofrac/fracderiv.hpp"
#include "chronofrac/function.hpp"
#include "chronofrac/quadrature.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/timescale.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

namespace chronofrac {

struct Window {
    double lo;
    double hi;
};

/**
 * F with F^Δ = f on T ∩ [lo, hi], anchored so that F(base) = 0.
 *
 * Scattered steps accumulate mu(t) f(t); dense segments are integrated with
 * adaptive Simpson. F is evaluable at every window point and additionally at the
 * forward jump of the last one.
 */
class Antiderivative {
public:
    Antiderivative(FnOnScale f, TimeScale scale, Window window, std::optional<double> base = std::nullopt,
                   QuadratureOptions quad = {})
        : f_(std::move(f)), scale_(std::move(scale)), window_(window), quad_(quad)
    {
        double first = 0.0;
        pieces_ = scale_.pieces(window.lo, window.hi, &first);
        nodes_.reserve(pieces_.size() + 1);
        cumulative_.reserve(pieces_.size() + 1);
        nodes_.push_back(first);
        cumulative_.push_back(0.0);
        for (const auto& p : pieces_) {
            const double step = p.dense ? adaptive_simpson(f_, p.a, p.b, quad_) : scale_.graininess(p.a) * f_(p.a);
            nodes_.push_back(p.b);
            steps_.push_back(step);
            cumulative_.push_back(cumulative_.back() + step);
        }
        base_ = base.value_or(first);
        if (!scale_.contains(base_))
            throw Error(ErrorCode::PointNotInScale, "base point " + shortest_repr(base_) + " is not in the scale");
        if (base_ < window.lo - tol_at(window.lo) || base_ > window.hi + tol_at(window.hi))
            throw Error(ErrorCode::OutsideWindow, "base point " + shortest_repr(base_) + " is outside the window");
        offset_ = raw(base_);
    }

    double operator()(double t) const { return raw(t) - offset_; }

    /// F(a) - F(b). Neighbouring nodes return the stored step itself, and two
    /// points on one dense segment are integrated directly.
    double difference(double a, double b) const
    {
        const auto la = locate(a);
        const auto lb = locate(b);
        if (la.at_node && lb.at_node) {
            if (la.piece == lb.piece)
                return 0.0;
            if (la.piece == lb.piece + 1)
                return steps_[lb.piece];
            if (lb.piece == la.piece + 1)
                return -steps_[la.piece];
        }
        if (shared_dense_piece(la, lb))
            return adaptive_simpson(f_, b, a, quad_);
        return value_at(la, a) - value_at(lb, b);
    }

    const TimeScale& scale() const noexcept { return scale_; }
    const FnOnScale& integrand() const noexcept { return f_; }
    double base_point() const noexcept { return base_; }
    const Window& window() const noexcept { return window_; }
    /// Range of points at which F can be evaluated.
    std::pair<double, double> span() const noexcept { return {nodes_.front(), nodes_.back()}; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }

private:
    struct Where {
        std::size_t piece; // index into pieces_, == pieces_.size() for the last node
        bool at_node;
    };

    FnOnScale f_;
    TimeScale scale_;
    Window window_;
    QuadratureOptions quad_;
    std::vector<Piece> pieces_;
    std::vector<double> nodes_;
    std::vector<double> steps_;
    std::vector<double> cumulative_;
    double base_ = 0.0;
    double offset_ = 0.0;

    Where locate(double t) const
    {
        if (t < nodes_.front() - tol_at(nodes_.front()) || t > nodes_.back() + tol_at(nodes_.back()))
            throw Error(ErrorCode::OutsideWindow, "t = " + shortest_repr(t) + " lies outside the antiderivative window");
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
        std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
        if (i + 1 < nodes_.size() && near(t, nodes_[i + 1]))
            return {i + 1, true};
        if (near(t, nodes_[i]))
            return {i, true};
        if (i < pieces_.size() && pieces_[i].dense)
            return {i, false};
        throw Error(ErrorCode::PointNotInScale, "t = " + shortest_repr(t) + " is not in the scale");
    }

    // A node belongs to the piece it starts and the piece it ends.
    bool shared_dense_piece(const Where& x, const Where& y) const
    {
        auto touches = [](const Where& w, std::size_t p) {
            return w.piece == p || (w.at_node && w.piece == p + 1);
        };
        for (std::size_t p : {x.piece, x.piece - 1}) {
            if (p >= pieces_.size() || !pieces_[p].dense)
                continue;
            if (touches(x, p) && touches(y, p))
                return true;
        }
        return false;
    }

    double value_at(const Where& w, double t) const
    {
        if (w.at_node)
            return cumulative_[w.piece];
        return cumulative_[w.piece] + adaptive_simpson(f_, pieces_[w.piece].a, t, quad_);
    }

    double raw(double t) const { return value_at(locate(t), t); }
};

/// F^beta(t) = F^(1-beta)(t): the indefinite fractional integral of order beta.
class FracIntegralFn {
public:
    FracIntegralFn(std::shared_ptr<const Antiderivative> antiderivative, const Rational& beta, LimitOptions opts = {})
        : f_(std::move(antiderivative)), beta_(beta), opts_(std::move(opts))
    {
        if (beta < Rational(0) || beta > Rational(1))
            throw Error(ErrorCode::InvalidArgument, "integral order must lie in [0, 1], got " + beta.to_string());
        if (!opts_.bounds)
            opts_.bounds = f_->span();
    }

    const Rational& beta() const noexcept { return beta_; }
    const Antiderivative& antiderivative() const noexcept { return *f_; }

    DerivResult evaluate(double t) const
    {
        if (!f_->scale().contains(t))
            throw Error(ErrorCode::PointNotInScale, shortest_repr(t) + " is not in " + f_->scale().describe());
        if (beta_ == Rational(1))
            return {(*f_)(t), Method::IdentityOrder, 0.0, 1};
        const FractionalOrder order(Rational(1) - beta_);
        return fractional_quotient(f_->scale(), t, order,
                                   [this](double a, double b) { return f_->difference(a, b); }, opts_);
    }

    double operator()(double t) const { return evaluate(t).value; }

private:
    std::shared_ptr<const Antiderivative> f_;
    Rational beta_;
    LimitOptions opts_;
};

inline Antiderivative delta_antiderivative(const FnOnScale& f, const TimeScale& scale, Window window,
                                           std::optional<double> base = std::nullopt)
{
    return Antiderivative(f, scale, window, base);
}

inline FracIntegralFn frac_indefinite_integral(const FnOnScale& f, const TimeScale& scale, const Rational& beta,
                                               Window window, std::optional<double> base = std::nullopt,
                                               const LimitOptions& opts = {})
{
    return FracIntegralFn(std::make_shared<const Antiderivative>(f, scale, window, base), beta, opts);
}

/// F^beta(b) - F^beta(a) for an already built indefinite integral.
inline double cauchy_frac_integral(const FracIntegralFn& fb, double a, double b)
{
    const auto& scale = fb.antiderivative().scale();
    for (double x : {a, b}) {
        if (!scale.contains(x))
            throw Error(ErrorCode::PointNotInScale, shortest_repr(x) + " is not in " + scale.describe());
        const auto& w = fb.antiderivative().window();
        if (x < w.lo - tol_at(w.lo) || x > w.hi + tol_at(w.hi))
            throw Error(ErrorCode::OutsideWindow, shortest_repr(x) + " is outside the integration window");
    }
    return fb(b) - fb(a);
}

/// Cauchy fractional integral of f over [a, b] with order beta in [0, 1].
inline double cauchy_frac_integral(const FnOnScale& f, const TimeScale& scale, double a, double b, const Rational& beta,
                                   Window window, std::optional<double> base = std::nullopt,
                                   const LimitOptions& opts = {})
{
    return cauchy_frac_integral(frac_indefinite_integral(f, scale, beta, window, base, opts), a, b);
}

} // namespace chronofrac
