#pragma once

#include "chronofrac/error.hpp"

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

namespace chronofrac {

/// Exact rational p/q over 64-bit integers, always in lowest terms with q > 0.
/// Arithmetic is carried in 128 bits and throws on overflow rather than wrapping.
__extension__ typedef __int128 wide_int; // intermediate width for overflow-free products

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {} // NOLINT(implicit)

    Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_integer() const noexcept { return den_ == 1; }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_negative() const noexcept { return num_ < 0; }

    /// Largest integer not exceeding the value.
    std::int64_t floor() const noexcept
    {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0)
            --q;
        return q;
    }

    std::string to_string() const
    {
        if (den_ == 1)
            return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        return from_wide(static_cast<wide_int>(a.num_) * b.den_ + static_cast<wide_int>(b.num_) * a.den_,
                         static_cast<wide_int>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        return from_wide(static_cast<wide_int>(a.num_) * b.num_, static_cast<wide_int>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0)
            throw Error(ErrorCode::DivisionByZero, "rational division by zero");
        return from_wide(static_cast<wide_int>(a.num_) * b.den_, static_cast<wide_int>(a.den_) * b.num_);
    }
    Rational operator-() const
    {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const wide_int lhs = static_cast<wide_int>(a.num_) * b.den_;
        const wide_int rhs = static_cast<wide_int>(b.num_) * a.den_;
        return lhs <=> rhs;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    void assign(std::int64_t num, std::int64_t den)
    {
        if (den == 0)
            throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
        *this = from_wide(num, den);
    }

    static wide_int gcd_wide(wide_int a, wide_int b)
    {
        if (a < 0)
            a = -a;
        if (b < 0)
            b = -b;
        while (b != 0) {
            const wide_int r = a % b;
            a = b;
            b = r;
        }
        return a;
    }

    static Rational from_wide(wide_int num, wide_int den)
    {
        if (den == 0)
            throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const wide_int g = gcd_wide(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        constexpr wide_int limit = static_cast<wide_int>(INT64_MAX);
        if (num > limit || num < -limit || den > limit)
            throw Error(ErrorCode::InvalidArgument, "rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }
};

namespace detail {

// Finite decimal literal ("-12.5", "3", "1e-3", ".25") to an exact rational.
inline std::optional<Rational> parse_decimal(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    wide_int mantissa = 0;
    int scale = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            any_digit = true;
            if (mantissa > static_cast<wide_int>(INT64_MAX))
                return std::nullopt;
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point)
                ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit)
        return std::nullopt;
    int exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        bool exp_digit = false;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            exp_digit = true;
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 40)
                return std::nullopt;
        }
        if (!exp_digit)
            return std::nullopt;
        if (exp_negative)
            exponent = -exponent;
    }
    if (i != text.size())
        return std::nullopt;
    exponent -= scale;
    wide_int den = 1;
    for (; exponent > 0; --exponent)
        mantissa *= 10;
    for (; exponent < 0; ++exponent)
        den *= 10;
    if (mantissa > static_cast<wide_int>(INT64_MAX) || den > static_cast<wide_int>(INT64_MAX))
        return std::nullopt;
    try {
        Rational r(static_cast<std::int64_t>(mantissa), static_cast<std::int64_t>(den));
        return negative ? -r : r;
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace detail

/// Parses "p/q" or a finite decimal into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
            s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (auto r = detail::parse_decimal(text))
            return *r;
        throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
    }
    auto num = detail::parse_decimal(trim(text.substr(0, slash)));
    auto den = detail::parse_decimal(trim(text.substr(slash + 1)));
    if (!num || !den)
        throw Error(ErrorCode::InvalidArgument, "not a rational: '" + std::string(text) + "'");
    return *num / *den;
}

} // namespace chronofrac
