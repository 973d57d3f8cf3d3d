// csv.hpp — Deterministic number formatting for CSV output: shortest
// round-trip decimal form via std::to_chars, locale independent.

#pragma once

#include <charconv>
#include <optional>
#include <string>

namespace oscimol::app {

inline void append_number(std::string& out, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline void append_number(std::string& out, int v) {
    char buf[16];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

// empty field for a disengaged optional
inline void append_optional(std::string& out, const std::optional<double>& v) {
    if (v) append_number(out, *v);
}

} // namespace oscimol::app
