#pragma once

/**
 * @file timescale.hpp
 * @brief Time scales: nonempty closed subsets of the real line.
 *
 * Four representations are supported, each with closed-form jump operators:
 *
 *   - Reals                   every point is dense, sigma(t) = rho(t) = t
 *   - UniformGrid(h, anchor)  anchor + hZ, sigma(t) = t + h
 *   - CantorApprox(d)         the 2^d closed intervals of the depth-d Cantor
 *                             construction on [0, 1]
 *   - FiniteUnion             sorted, pairwise separated closed intervals and
 *                             single points
 *
 * Membership and endpoint comparisons use a relative tolerance of 1e-12.
 * Graininess at a scattered point is computed from the stored endpoints (or the
 * exact grid/Cantor indices), never by subtracting a perturbed query point.
 */

#include "chronofrac/error.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chronofrac {

inline constexpr double kRelTol = 1e-12;

inline double tol_at(double x) noexcept { return kRelTol * std::max(1.0, std::fabs(x)); }

inline bool near(double x, double y) noexcept { return std::fabs(x - y) <= tol_at(std::max(std::fabs(x), std::fabs(y))); }

struct ClosedInterval {
    double a;
    double b;
};

struct SinglePoint {
    double p;
};

using Component = std::variant<ClosedInterval, SinglePoint>;

inline double left_of(const Component& c)
{
    return std::visit([](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ClosedInterval>)
            return v.a;
        else
            return v.p;
    }, c);
}

inline double right_of(const Component& c)
{
    return std::visit([](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ClosedInterval>)
            return v.b;
        else
            return v.p;
    }, c);
}

struct PointClass {
    bool right_scattered = false;
    bool left_scattered = false;
    bool is_min = false;
    bool is_max = false;

    bool right_dense() const noexcept { return !right_scattered && !is_max; }
    bool left_dense() const noexcept { return !left_scattered && !is_min; }
    bool isolated() const noexcept { return right_scattered && left_scattered; }
};

enum class Side { left, right, both };

/// One tile of a window: a dense segment [a, b], or a scattered step from a to b = sigma(a).
struct Piece {
    double a;
    double b;
    bool dense;
};

class TimeScale {
public:
    struct Reals {};
    struct UniformGrid {
        double h;
        double anchor;
        std::optional<Rational> exact_h;
        std::optional<Rational> exact_anchor;
    };
    struct CantorApprox {
        int depth;
    };
    struct FiniteUnion {
        std::vector<Component> components;
    };
    using Variant = std::variant<Reals, UniformGrid, CantorApprox, FiniteUnion>;

    static constexpr int kMaxCantorDepth = 30;
    static constexpr std::int64_t kMaxPieces = 20'000'000;

    static TimeScale reals() { return TimeScale(Reals{}); }

    static TimeScale uniform_grid(double h, double anchor = 0.0)
    {
        if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(anchor))
            throw Error(ErrorCode::InvalidArgument, "grid step must be positive and finite");
        return TimeScale(UniformGrid{h, anchor, std::nullopt, std::nullopt});
    }

    static TimeScale uniform_grid(const Rational& h, const Rational& anchor)
    {
        if (h <= Rational(0))
            throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
        return TimeScale(UniformGrid{h.to_double(), anchor.to_double(), h, anchor});
    }

    static TimeScale integers() { return uniform_grid(Rational(1), Rational(0)); }

    static TimeScale cantor(int depth)
    {
        if (depth < 0 || depth > kMaxCantorDepth)
            throw Error(ErrorCode::InvalidArgument, "Cantor depth must lie in [0, 30]");
        return TimeScale(CantorApprox{depth});
    }

    /// Sorts the components and merges overlapping or touching ones.
    static TimeScale finite_union(std::vector<Component> components)
    {
        if (components.empty())
            throw Error(ErrorCode::InvalidArgument, "a time scale must be nonempty");
        for (auto& c : components) {
            if (auto* iv = std::get_if<ClosedInterval>(&c)) {
                if (!std::isfinite(iv->a) || !std::isfinite(iv->b) || iv->a > iv->b)
                    throw Error(ErrorCode::InvalidArgument, "interval endpoints must satisfy a <= b");
                if (iv->a == iv->b)
                    c = SinglePoint{iv->a};
            } else if (!std::isfinite(std::get<SinglePoint>(c).p)) {
                throw Error(ErrorCode::InvalidArgument, "point must be finite");
            }
        }
        std::stable_sort(components.begin(), components.end(),
                         [](const Component& x, const Component& y) { return left_of(x) < left_of(y); });
        std::vector<Component> merged;
        for (const auto& c : components) {
            if (!merged.empty() && left_of(c) <= right_of(merged.back()) + tol_at(right_of(merged.back()))) {
                const double lo = left_of(merged.back());
                const double hi = std::max(right_of(merged.back()), right_of(c));
                if (hi - lo > tol_at(hi))
                    merged.back() = ClosedInterval{lo, hi};
                continue;
            }
            merged.push_back(c);
        }
        return TimeScale(FiniteUnion{std::move(merged)});
    }

    static TimeScale interval(double a, double b) { return finite_union({ClosedInterval{a, b}}); }

    static TimeScale points(const std::vector<double>& ps)
    {
        std::vector<Component> cs;
        cs.reserve(ps.size());
        for (double p : ps)
            cs.emplace_back(SinglePoint{p});
        return finite_union(std::move(cs));
    }

    const Variant& variant() const noexcept { return v_; }
    bool is_reals() const noexcept { return std::holds_alternative<Reals>(v_); }
    bool is_grid() const noexcept { return std::holds_alternative<UniformGrid>(v_); }
    bool is_cantor() const noexcept { return std::holds_alternative<CantorApprox>(v_); }
    bool is_finite_union() const noexcept { return std::holds_alternative<FiniteUnion>(v_); }

    bool contains(double t) const { return locate(t).has_value(); }

    double sigma(double t) const { return jump_info(require(t)).sigma; }
    double rho(double t) const { return jump_info(require(t)).rho; }
    double graininess(double t) const { return jump_info(require(t)).mu; }

    PointClass classify(double t) const
    {
        const auto j = jump_info(require(t));
        PointClass c;
        c.right_scattered = j.mu > 0.0;
        c.left_scattered = j.rho < t && !near(j.rho, t);
        c.is_min = j.is_min;
        c.is_max = j.is_max;
        return c;
    }

    /// False exactly at a left-scattered maximum.
    bool in_kappa(double t) const
    {
        const auto c = classify(t);
        return !(c.is_max && c.left_scattered);
    }

    std::optional<double> min() const
    {
        return std::visit([](const auto& v) -> std::optional<double> {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, CantorApprox>)
                return 0.0;
            else if constexpr (std::is_same_v<V, FiniteUnion>)
                return left_of(v.components.front());
            else
                return std::nullopt;
        }, v_);
    }

    std::optional<double> max() const
    {
        return std::visit([](const auto& v) -> std::optional<double> {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, CantorApprox>)
                return 1.0;
            else if constexpr (std::is_same_v<V, FiniteUnion>)
                return right_of(v.components.back());
            else
                return std::nullopt;
        }, v_);
    }

    /// Scale point closest to `target` among points strictly on `side` of t
    /// (and inside `bounds` when given).
    std::optional<double> project(double target, double t, Side side,
                                  std::optional<std::pair<double, double>> bounds = std::nullopt) const
    {
        double lo = -INFINITY;
        double hi = INFINITY;
        if (bounds) {
            lo = bounds->first;
            hi = bounds->second;
        }
        const double eps = tol_at(t);
        if (side == Side::left)
            hi = std::min(hi, t - eps);
        else if (side == Side::right)
            lo = std::max(lo, t + eps);
        if (!(lo <= hi))
            return std::nullopt;
        target = std::clamp(target, lo, hi);
        auto best = nearest_member(target);
        std::optional<double> result;
        auto consider = [&](std::optional<double> s) {
            if (!s || *s < lo || *s > hi)
                return;
            if (!result || std::fabs(*s - target) < std::fabs(*result - target))
                result = s;
        };
        consider(best.below);
        consider(best.above);
        if (!result) {
            // Nearest points fell outside the admissible range; take the extreme member inside it.
            consider(first_member_at_or_after(lo));
            consider(last_member_at_or_before(hi));
        }
        return result;
    }

    /**
     * Up to k distinct scale points approaching t on the requested side, with
     * target offsets delta0 * ratio^j projected onto the scale. Left and right
     * lists are each strictly decreasing in |s - t|; Side::both interleaves them.
     * The ratio (default 1/2) sets the geometric shrink factor of the offsets.
     * An empty result means no approach exists.
     */
    std::vector<double> approach_points(double t, Side side, int k, std::optional<double> delta0 = std::nullopt,
                                        std::optional<std::pair<double, double>> bounds = std::nullopt,
                                        double ratio = 0.5) const
    {
        require(t);
        if (!(ratio > 0.0 && ratio < 1.0))
            throw Error(ErrorCode::InvalidArgument, "approach ratio must lie in (0, 1)");
        if (side == Side::both) {
            const auto l = approach_points(t, Side::left, k, delta0, bounds, ratio);
            const auto r = approach_points(t, Side::right, k, delta0, bounds, ratio);
            std::vector<double> out;
            for (std::size_t i = 0; i < std::max(l.size(), r.size()) && static_cast<int>(out.size()) < k; ++i) {
                if (i < l.size())
                    out.push_back(l[i]);
                if (i < r.size() && static_cast<int>(out.size()) < k)
                    out.push_back(r[i]);
            }
            return out;
        }
        const double d0 = delta0.value_or(default_delta0(t));
        std::vector<double> out;
        double last_gap = INFINITY;
        double delta = d0;
        for (int j = 0; j < 4000 && static_cast<int>(out.size()) < k; ++j, delta *= ratio) {
            if (delta <= std::fabs(t) * 1e-16 || delta < 1e-300)
                break;
            const double target = side == Side::left ? t - delta : t + delta;
            const auto s = project(target, t, side, bounds);
            if (!s)
                break;
            const double gap = std::fabs(*s - t);
            if (gap > 0.0 && gap < last_gap) {
                out.push_back(*s);
                last_gap = gap;
            }
        }
        return out;
    }

    static double default_delta0(double t) noexcept { return std::max(std::fabs(t), 1.0) / 16.0; }

    /**
     * Tiles T ∩ [lo, hi] from its first to its last point. When the last point is
     * right-scattered, one extra step to its forward jump is appended so that
     * sigma of every window point is covered.
     */
    std::vector<Piece> pieces(double lo, double hi, double* first_point = nullptr) const
    {
        if (lo > hi)
            throw Error(ErrorCode::WindowEmpty, "window lower bound exceeds upper bound");
        std::vector<Piece> out;
        std::optional<double> start;
        std::visit([&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Reals>) {
                start = lo;
                if (hi > lo)
                    out.push_back({lo, hi, true});
            } else if constexpr (std::is_same_v<V, UniformGrid>) {
                const double n0 = std::ceil((lo - v.anchor) / v.h - kRelTol * std::max(1.0, std::fabs((lo - v.anchor) / v.h)));
                const double n1 = std::floor((hi - v.anchor) / v.h + kRelTol * std::max(1.0, std::fabs((hi - v.anchor) / v.h)));
                if (n0 > n1)
                    return;
                if (n1 - n0 > static_cast<double>(kMaxPieces))
                    throw Error(ErrorCode::InvalidArgument, "window spans too many grid points");
                start = v.anchor + n0 * v.h;
                for (double n = n0; n <= n1; n += 1.0) {
                    const double x = v.anchor + n * v.h;
                    out.push_back({x, x + v.h, false});
                }
            } else if constexpr (std::is_same_v<V, CantorApprox>) {
                const std::int64_t count = pow3(v.depth);
                const double scale = static_cast<double>(count);
                std::int64_t k = static_cast<std::int64_t>(std::floor(std::max(lo, 0.0) * scale));
                k = std::clamp<std::int64_t>(k, 0, count - 1);
                std::vector<Component> comps;
                // Step back one interval so a window starting on a right endpoint keeps that endpoint.
                k = cantor_prev_valid(v.depth, k);
                for (; k < count; k = cantor_next_valid(v.depth, k + 1)) {
                    const double a = static_cast<double>(k) / scale;
                    const double b = static_cast<double>(k + 1) / scale;
                    comps.push_back(ClosedInterval{a, b});
                    // The first interval past the window only serves as a successor.
                    if (a > hi + tol_at(hi))
                        break;
                    if (static_cast<std::int64_t>(comps.size()) > kMaxPieces)
                        throw Error(ErrorCode::InvalidArgument, "window spans too many Cantor intervals");
                    if (k + 1 >= count)
                        break;
                }
                tile_components(comps, lo, hi, out, start);
            } else {
                tile_components(v.components, lo, hi, out, start);
            }
        }, v_);
        if (!start)
            throw Error(ErrorCode::WindowEmpty, "window contains no scale point");
        if (first_point)
            *first_point = *start;
        return out;
    }

    std::string describe() const
    {
        return std::visit([](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Reals>) {
                return "R";
            } else if constexpr (std::is_same_v<V, UniformGrid>) {
                const std::string h = v.exact_h ? v.exact_h->to_string() : shortest_repr(v.h);
                const std::string a = v.exact_anchor ? v.exact_anchor->to_string() : shortest_repr(v.anchor);
                return "hZ:" + h + "@" + a;
            } else if constexpr (std::is_same_v<V, CantorApprox>) {
                return "cantor:" + std::to_string(v.depth);
            } else {
                std::string s = "union:{";
                bool first = true;
                for (const auto& c : v.components) {
                    if (!first)
                        s += ",";
                    first = false;
                    if (const auto* iv = std::get_if<ClosedInterval>(&c))
                        s += "[" + shortest_repr(iv->a) + "," + shortest_repr(iv->b) + "]";
                    else
                        s += "{" + shortest_repr(std::get<SinglePoint>(c).p) + "}";
                }
                return s + "}";
            }
        }, v_);
    }

    // Cantor index helpers, exposed for tests. An index k in [0, 3^d) names the
    // interval [k/3^d, (k+1)/3^d]; it belongs to the construction iff its d
    // base-3 digits avoid 1.
    static std::int64_t pow3(int d) noexcept
    {
        std::int64_t p = 1;
        for (int i = 0; i < d; ++i)
            p *= 3;
        return p;
    }

    static bool cantor_valid(int depth, std::int64_t k) noexcept
    {
        if (k < 0 || k >= pow3(depth))
            return false;
        for (int i = 0; i < depth; ++i, k /= 3)
            if (k % 3 == 1)
                return false;
        return true;
    }

    /// Smallest valid index >= k, or 3^d when none remains.
    static std::int64_t cantor_next_valid(int depth, std::int64_t k) noexcept
    {
        const std::int64_t count = pow3(depth);
        if (k >= count)
            return count;
        if (k < 0)
            k = 0;
        std::int64_t place = count / 3;
        std::int64_t prefix = 0;
        for (; place >= 1; place /= 3) {
            const std::int64_t digit = (k / place) % 3;
            if (digit == 1)
                return prefix + 2 * place;
            prefix += digit * place;
        }
        return k;
    }

    /// Largest valid index <= k, or -1 when k < 0.
    static std::int64_t cantor_prev_valid(int depth, std::int64_t k) noexcept
    {
        const std::int64_t count = pow3(depth);
        if (k < 0)
            return -1;
        if (k >= count)
            k = count - 1;
        std::int64_t place = count / 3;
        std::int64_t prefix = 0;
        for (; place >= 1; place /= 3) {
            const std::int64_t digit = (k / place) % 3;
            if (digit == 1)
                return prefix + place - 1; // digit 0 followed by all 2s
            prefix += digit * place;
        }
        return k;
    }

private:
    explicit TimeScale(Variant v) : v_(std::move(v)) {}

    Variant v_;

    // Where a member point sits, in representation-specific terms.
    struct Location {
        enum class Where { Dense, Grid, Node, Interior, AtLeft, AtRight, Point } where;
        std::int64_t index = 0; // component / Cantor node index
        double grid_index = 0.0;
        bool left_end = false;  // Cantor node starts an interval
        bool right_end = false; // Cantor node ends an interval
        double t = 0.0;
    };

    struct Jump {
        double sigma;
        double rho;
        double mu;
        bool is_min;
        bool is_max;
    };

    Location require(double t) const
    {
        auto loc = locate(t);
        if (!loc)
            throw Error(ErrorCode::PointNotInScale, shortest_repr(t) + " is not in " + describe());
        return *loc;
    }

    std::optional<Location> locate(double t) const
    {
        if (!std::isfinite(t))
            return std::nullopt;
        return std::visit([t](const auto& v) -> std::optional<Location> {
            using V = std::decay_t<decltype(v)>;
            using W = Location::Where;
            if constexpr (std::is_same_v<V, Reals>) {
                return Location{W::Dense, 0, 0.0, false, false, t};
            } else if constexpr (std::is_same_v<V, UniformGrid>) {
                const double u = (t - v.anchor) / v.h;
                const double n = std::nearbyint(u);
                if (std::fabs(u - n) > kRelTol * std::max(1.0, std::fabs(u)))
                    return std::nullopt;
                return Location{W::Grid, 0, n, false, false, t};
            } else if constexpr (std::is_same_v<V, CantorApprox>) {
                const std::int64_t count = pow3(v.depth);
                const double scale = static_cast<double>(count);
                if (t < -tol_at(t) || t > 1.0 + tol_at(t))
                    return std::nullopt;
                const double u = t * scale;
                const double n = std::nearbyint(u);
                if (std::fabs(u - n) <= tol_at(t) * scale) {
                    const auto k = static_cast<std::int64_t>(n);
                    const bool starts = k < count && cantor_valid(v.depth, k);
                    const bool ends = k >= 1 && cantor_valid(v.depth, k - 1);
                    if (!starts && !ends)
                        return std::nullopt;
                    return Location{W::Node, k, 0.0, starts, ends, t};
                }
                const auto k = static_cast<std::int64_t>(std::floor(u));
                if (!cantor_valid(v.depth, k))
                    return std::nullopt;
                return Location{W::Interior, k, 0.0, false, false, t};
            } else {
                const auto& cs = v.components;
                auto it = std::upper_bound(cs.begin(), cs.end(), t + tol_at(t),
                                           [](double x, const Component& c) { return x < left_of(c); });
                if (it == cs.begin())
                    return std::nullopt;
                --it;
                const auto i = static_cast<std::int64_t>(it - cs.begin());
                if (std::holds_alternative<SinglePoint>(*it)) {
                    if (near(t, std::get<SinglePoint>(*it).p))
                        return Location{W::Point, i, 0.0, false, false, t};
                    return std::nullopt;
                }
                const auto& iv = std::get<ClosedInterval>(*it);
                if (near(t, iv.b))
                    return Location{W::AtRight, i, 0.0, false, false, t};
                if (near(t, iv.a))
                    return Location{W::AtLeft, i, 0.0, false, false, t};
                if (t > iv.a && t < iv.b)
                    return Location{W::Interior, i, 0.0, false, false, t};
                return std::nullopt;
            }
        }, v_);
    }

    Jump jump_info(const Location& loc) const
    {
        const double t = loc.t;
        return std::visit([&](const auto& v) -> Jump {
            using V = std::decay_t<decltype(v)>;
            using W = Location::Where;
            if constexpr (std::is_same_v<V, Reals>) {
                return {t, t, 0.0, false, false};
            } else if constexpr (std::is_same_v<V, UniformGrid>) {
                return {t + v.h, t - v.h, v.h, false, false};
            } else if constexpr (std::is_same_v<V, CantorApprox>) {
                const std::int64_t count = pow3(v.depth);
                const double scale = static_cast<double>(count);
                Jump j{t, t, 0.0, false, false};
                if (loc.where == W::Node) {
                    const std::int64_t n = loc.index;
                    j.is_min = n == 0;
                    j.is_max = n == count;
                    if (!loc.left_end && n < count) {
                        const std::int64_t next = cantor_next_valid(v.depth, n);
                        j.sigma = static_cast<double>(next) / scale;
                        j.mu = static_cast<double>(next - n) / scale;
                    }
                    if (!loc.right_end && n > 0) {
                        const std::int64_t prev = cantor_prev_valid(v.depth, n - 1);
                        j.rho = static_cast<double>(prev + 1) / scale;
                    }
                }
                return j;
            } else {
                const auto& cs = v.components;
                const auto i = static_cast<std::size_t>(loc.index);
                const bool has_next = i + 1 < cs.size();
                const bool has_prev = i > 0;
                Jump j{t, t, 0.0, false, false};
                const bool at_right = loc.where == W::AtRight || loc.where == W::Point;
                const bool at_left = loc.where == W::AtLeft || loc.where == W::Point;
                if (at_right && has_next) {
                    j.sigma = left_of(cs[i + 1]);
                    j.mu = left_of(cs[i + 1]) - right_of(cs[i]);
                }
                if (at_left && has_prev)
                    j.rho = right_of(cs[i - 1]);
                j.is_min = at_left && !has_prev;
                j.is_max = at_right && !has_next;
                return j;
            }
        }, v_);
    }

    struct Neighbours {
        std::optional<double> below; // largest member <= x
        std::optional<double> above; // smallest member >= x
    };

    Neighbours nearest_member(double x) const
    {
        return std::visit([x](const auto& v) -> Neighbours {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Reals>) {
                return {x, x};
            } else if constexpr (std::is_same_v<V, UniformGrid>) {
                const double u = (x - v.anchor) / v.h;
                return {v.anchor + std::floor(u) * v.h, v.anchor + std::ceil(u) * v.h};
            } else if constexpr (std::is_same_v<V, CantorApprox>) {
                const std::int64_t count = pow3(v.depth);
                const double scale = static_cast<double>(count);
                if (x <= 0.0)
                    return {std::nullopt, 0.0};
                if (x >= 1.0)
                    return {1.0, std::nullopt};
                const auto k = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(x * scale)), 0, count - 1);
                if (cantor_valid(v.depth, k))
                    return {x, x};
                const std::int64_t prev = cantor_prev_valid(v.depth, k);
                const std::int64_t next = cantor_next_valid(v.depth, k);
                Neighbours n;
                if (prev >= 0)
                    n.below = static_cast<double>(prev + 1) / scale;
                if (next < count)
                    n.above = static_cast<double>(next) / scale;
                return n;
            } else {
                const auto& cs = v.components;
                auto it = std::upper_bound(cs.begin(), cs.end(), x,
                                           [](double y, const Component& c) { return y < left_of(c); });
                Neighbours n;
                if (it != cs.end())
                    n.above = left_of(*it);
                if (it != cs.begin()) {
                    const auto& c = *std::prev(it);
                    if (x <= right_of(c))
                        return {x, x};
                    n.below = right_of(c);
                }
                return n;
            }
        }, v_);
    }

    std::optional<double> first_member_at_or_after(double x) const
    {
        if (!std::isfinite(x))
            return min();
        auto n = nearest_member(x);
        return n.above;
    }

    std::optional<double> last_member_at_or_before(double x) const
    {
        if (!std::isfinite(x))
            return max();
        auto n = nearest_member(x);
        return n.below;
    }

    static void tile_components(const std::vector<Component>& cs, double lo, double hi, std::vector<Piece>& out,
                                std::optional<double>& start)
    {
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const double left = left_of(cs[i]);
            const double right = right_of(cs[i]);
            if (right < lo - tol_at(lo))
                continue;
            if (left > hi + tol_at(hi))
                break;
            const double a = std::max(left, lo);
            const double b = std::min(right, hi);
            if (!start)
                start = near(a, left) ? left : a;
            if (b - a > tol_at(b))
                out.push_back({near(a, left) ? left : a, near(b, right) ? right : b, true});
            const bool right_inside = right <= hi + tol_at(hi);
            if (right_inside && i + 1 < cs.size())
                out.push_back({right, left_of(cs[i + 1]), false});
            if (right_inside && i + 1 < cs.size() && left_of(cs[i + 1]) > hi + tol_at(hi))
                break;
        }
    }
};

} // namespace chronofrac
