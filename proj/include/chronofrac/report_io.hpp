#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

namespace chronofrac {

/// 17 significant digits, the JSON output precision.
inline std::string format_json_number(double x)
{
    if (!std::isfinite(x))
        return "null";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Shortest form that parses back to the same double.
inline std::string shortest_repr(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// Shortest round-trip form, the CSV output precision.
inline std::string format_csv_number(double x)
{
    return std::isfinite(x) ? shortest_repr(x) : "nan";
}

inline std::string json_escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
    return out;
}

/// Minimal single-line JSON object builder with deterministic field order.
class JsonLine {
public:
    JsonLine& field(std::string_view key, double value) { return raw(key, format_json_number(value)); }
    JsonLine& field(std::string_view key, int value) { return raw(key, std::to_string(value)); }
    JsonLine& field(std::string_view key, bool value) { return raw(key, value ? "true" : "false"); }
    JsonLine& field(std::string_view key, std::string_view value) { return raw(key, json_escape(value)); }
    JsonLine& field(std::string_view key, const char* value) { return field(key, std::string_view(value)); }

    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;

    JsonLine& raw(std::string_view key, const std::string& value)
    {
        if (!body_.empty())
            body_ += ",";
        body_ += json_escape(key);
        body_ += ":";
        body_ += value;
        return *this;
    }
};

} // namespace chronofrac
