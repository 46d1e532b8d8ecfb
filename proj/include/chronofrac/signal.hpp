#pragma once

/**
 * @file signal.hpp
 * @brief Sampled signals: a CSV of (t, value) rows becomes a finite point scale
 * with a table-backed function on it.
 *
 * Format: optional header line "t,value", then one "t,value" row per line.
 * Blank lines are skipped. Repeated timestamps with equal values collapse;
 * repeated timestamps with different values are rejected.
 */

#include "chronofrac/error.hpp"
#include "chronofrac/expr.hpp"
#include "chronofrac/function.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/timescale.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace chronofrac {

struct SignalTable {
    TimeScale scale;
    FnOnScale fn;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace detail

inline SignalTable ingest_csv(std::istream& in)
{
    std::map<double, double> samples;
    std::string line;
    int line_no = 0;
    bool seen_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = detail::trim(line);
        if (s.empty())
            continue;
        const auto comma = s.find(',');
        if (!seen_row && line_no == 1 && comma != std::string_view::npos && detail::trim(s.substr(0, comma)) == "t" &&
            detail::trim(s.substr(comma + 1)) == "value")
            continue;
        seen_row = true;
        if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two fields 't,value'");
        const auto t = detail::parse_double(s.substr(0, comma));
        const auto v = detail::parse_double(s.substr(comma + 1));
        if (!t || !v)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": malformed number");
        const auto [it, inserted] = samples.emplace(*t, *v);
        if (!inserted && it->second != *v)
            throw Error(ErrorCode::DuplicateTimestampConflict,
                        "t = " + shortest_repr(*t) + " has conflicting values on line " + std::to_string(line_no));
    }
    if (samples.empty())
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": no data rows");
    std::vector<double> ts;
    ts.reserve(samples.size());
    for (const auto& [t, v] : samples)
        ts.push_back(t);
    return {TimeScale::points(ts), FnOnScale::table(std::move(samples))};
}

inline SignalTable ingest_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    return ingest_csv(in);
}

} // namespace chronofrac
