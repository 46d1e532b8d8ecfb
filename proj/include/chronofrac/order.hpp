#pragma once

#include "chronofrac/error.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/report_io.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace chronofrac {

/// Exact order alpha = p/q with 0 < alpha <= 1.
class FractionalOrder {
public:
    explicit FractionalOrder(const Rational& value) : value_(value)
    {
        if (value <= Rational(0) || value > Rational(1))
            throw Error(ErrorCode::InvalidArgument, "fractional order must lie in (0, 1], got " + value.to_string());
    }
    FractionalOrder(std::int64_t p, std::int64_t q) : FractionalOrder(Rational(p, q)) {}

    static FractionalOrder one() { return FractionalOrder(1, 1); }

    std::int64_t p() const noexcept { return value_.num(); }
    std::int64_t q() const noexcept { return value_.den(); }
    const Rational& value() const noexcept { return value_; }
    double to_double() const noexcept { return value_.to_double(); }
    bool is_one() const noexcept { return value_ == Rational(1); }

    /// True for alpha in {1/q : q odd}, the orders whose power (t - s)^alpha is real
    /// on both sides of t. alpha = 1 qualifies.
    bool odd_reciprocal() const noexcept { return p() == 1 && q() % 2 == 1; }

    std::string to_string() const { return value_.to_string(); }

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    Rational value_;
};

/// Nonnegative order beta split as beta = N + alpha with N = floor(beta).
class HigherOrder {
public:
    explicit HigherOrder(const Rational& beta) : beta_(beta)
    {
        if (beta.is_negative())
            throw Error(ErrorCode::InvalidArgument, "order must be nonnegative, got " + beta.to_string());
        steps_ = static_cast<int>(beta.floor());
        remainder_ = beta - Rational(steps_);
    }

    const Rational& beta() const noexcept { return beta_; }
    /// N, the number of delta derivatives taken before the fractional step.
    int integer_part() const noexcept { return steps_; }
    const Rational& fractional_part() const noexcept { return remainder_; }
    /// The fractional step, or nothing when beta is an integer (order-0 identity).
    std::optional<FractionalOrder> alpha() const
    {
        if (remainder_.is_zero())
            return std::nullopt;
        return FractionalOrder(remainder_);
    }

private:
    Rational beta_;
    int steps_ = 0;
    Rational remainder_;
};

namespace detail {

inline double root_magnitude(double x, std::int64_t q)
{
    switch (q) {
    case 1: return x;
    case 2: return std::sqrt(x);
    case 3: return std::cbrt(x);
    default: return std::pow(x, 1.0 / static_cast<double>(q));
    }
}

inline double integer_power(double x, std::int64_t n)
{
    if (n < 0) {
        if (x == 0.0)
            throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
        return 1.0 / integer_power(x, -n);
    }
    double result = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1)
            result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

} // namespace detail

/// x^alpha with real semantics: for x < 0 only odd-reciprocal orders are defined,
/// and yield the sign-preserving real root.
inline double rpow(double x, const FractionalOrder& alpha)
{
    if (alpha.is_one())
        return x;
    if (x >= 0.0) {
        if (alpha.p() == 1)
            return detail::root_magnitude(x, alpha.q());
        return std::pow(x, alpha.to_double());
    }
    if (!alpha.odd_reciprocal())
        throw Error(ErrorCode::NegativeBaseUndefined,
                    "negative base " + shortest_repr(x) + " with order " + alpha.to_string());
    return -detail::root_magnitude(-x, alpha.q());
}

/// x^(p/q) for any rational exponent; negative bases need an odd denominator.
inline double real_pow(double x, const Rational& exponent)
{
    if (exponent.is_integer())
        return detail::integer_power(x, exponent.num());
    const std::int64_t p = exponent.num();
    const std::int64_t q = exponent.den();
    if (x == 0.0) {
        if (p < 0)
            throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
        return 0.0;
    }
    if (x < 0.0 && q % 2 == 0)
        throw Error(ErrorCode::NegativeBaseUndefined,
                    "negative base " + shortest_repr(x) + " with exponent " + exponent.to_string());
    const double magnitude = (p == 1) ? detail::root_magnitude(std::fabs(x), q)
                                      : std::pow(std::fabs(x), exponent.to_double());
    const bool odd_p = (p % 2) != 0;
    return (x < 0.0 && odd_p) ? -magnitude : magnitude;
}

} // namespace chronofrac
