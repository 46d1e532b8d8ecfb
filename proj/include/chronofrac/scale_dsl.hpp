#pragma once

// Scale DSL:
//   R | R[a,b] | Z | hZ:<h> | hZ:<h>@<anchor> | cantor:<d> | union:{<comp>,...}
//   comp = [a,b] | {p}
// Numbers are decimals or rationals p/q.

#include "chronofrac/error.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/timescale.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace chronofrac {

namespace detail {

inline std::string_view trim_view(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

inline Rational scale_number(std::string_view text, std::string_view whole)
{
    try {
        return parse_rational(text);
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidArgument,
                    "bad number '" + std::string(text) + "' in scale '" + std::string(whole) + "'");
    }
}

inline std::pair<Rational, Rational> scale_pair(std::string_view inner, std::string_view whole)
{
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos)
        throw Error(ErrorCode::InvalidArgument, "expected 'a,b' in scale '" + std::string(whole) + "'");
    return {scale_number(inner.substr(0, comma), whole), scale_number(inner.substr(comma + 1), whole)};
}

} // namespace detail

inline TimeScale parse_scale(std::string_view text)
{
    const std::string_view whole = text;
    text = detail::trim_view(text);
    auto bad = [&](const std::string& why) {
        return Error(ErrorCode::InvalidArgument, why + " in scale '" + std::string(whole) + "'");
    };

    if (text == "R")
        return TimeScale::reals();
    if (text == "Z")
        return TimeScale::integers();
    if (text.starts_with("R[")) {
        if (!text.ends_with("]"))
            throw bad("missing ']'");
        const auto [a, b] = detail::scale_pair(text.substr(2, text.size() - 3), whole);
        if (!(a < b))
            throw bad("interval needs a < b");
        return TimeScale::interval(a.to_double(), b.to_double());
    }
    if (text.starts_with("hZ:")) {
        auto rest = text.substr(3);
        Rational anchor(0);
        if (const auto at = rest.find('@'); at != std::string_view::npos) {
            anchor = detail::scale_number(rest.substr(at + 1), whole);
            rest = rest.substr(0, at);
        }
        const Rational h = detail::scale_number(rest, whole);
        if (h <= Rational(0))
            throw bad("grid step must be positive");
        return TimeScale::uniform_grid(h, anchor);
    }
    if (text.starts_with("cantor:")) {
        const Rational d = detail::scale_number(text.substr(7), whole);
        if (!d.is_integer() || d < Rational(0) || d > Rational(TimeScale::kMaxCantorDepth))
            throw bad("Cantor depth must be an integer in [0, 30]");
        return TimeScale::cantor(static_cast<int>(d.num()));
    }
    if (text.starts_with("union:")) {
        auto body = detail::trim_view(text.substr(6));
        if (body.size() < 2 || body.front() != '{' || body.back() != '}')
            throw bad("union body must be enclosed in braces");
        body = body.substr(1, body.size() - 2);
        std::vector<Component> comps;
        std::size_t i = 0;
        while (i < body.size()) {
            const char c = body[i];
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
                ++i;
                continue;
            }
            const char close = c == '[' ? ']' : c == '{' ? '}' : '\0';
            if (close == '\0')
                throw bad(std::string("unexpected '") + c + "'");
            const auto end = body.find(close, i);
            if (end == std::string_view::npos)
                throw bad(std::string("missing '") + close + "'");
            const auto inner = body.substr(i + 1, end - i - 1);
            if (c == '[') {
                const auto [a, b] = detail::scale_pair(inner, whole);
                if (!(a < b))
                    throw bad("interval needs a < b");
                comps.emplace_back(ClosedInterval{a.to_double(), b.to_double()});
            } else {
                comps.emplace_back(SinglePoint{detail::scale_number(inner, whole).to_double()});
            }
            i = end + 1;
        }
        if (comps.empty())
            throw bad("union must contain at least one component");
        return TimeScale::finite_union(std::move(comps));
    }
    throw bad("unknown scale form");
}

} // namespace chronofrac
