#pragma once

#include "chronofrac/error.hpp"
#include "chronofrac/expr.hpp"
#include "chronofrac/timescale.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace chronofrac {

/// A real function on a time scale: a closed-form expression, or a table of samples.
/// Tables are looked up, never interpolated.
class FnOnScale {
public:
    using Table = std::map<double, double>;

    FnOnScale(Expr e) : v_(std::move(e)) {} // NOLINT(implicit)

    static FnOnScale parse(std::string_view text) { return FnOnScale(parse_expr(text)); }

    static FnOnScale table(Table samples)
    {
        if (samples.empty())
            throw Error(ErrorCode::InvalidArgument, "a table-backed function needs at least one sample");
        return FnOnScale(std::make_shared<const Table>(std::move(samples)));
    }

    bool is_expr() const noexcept { return std::holds_alternative<Expr>(v_); }
    const Expr* expr() const noexcept { return std::get_if<Expr>(&v_); }
    const Table* samples() const noexcept
    {
        const auto* p = std::get_if<std::shared_ptr<const Table>>(&v_);
        return p ? p->get() : nullptr;
    }

    double operator()(double t) const
    {
        if (const auto* e = std::get_if<Expr>(&v_))
            return e->eval(t);
        const auto& tab = *std::get<std::shared_ptr<const Table>>(v_);
        auto it = tab.lower_bound(t - tol_at(t));
        if (it != tab.end() && near(it->first, t))
            return it->second;
        throw Error(ErrorCode::TablePointMissing, "no sample at t = " + shortest_repr(t));
    }

    std::string describe() const
    {
        if (const auto* e = std::get_if<Expr>(&v_))
            return e->to_string();
        return "table[" + std::to_string(samples()->size()) + "]";
    }

private:
    explicit FnOnScale(std::shared_ptr<const Table> t) : v_(std::move(t)) {}

    std::variant<Expr, std::shared_ptr<const Table>> v_;
};

} // namespace chronofrac
