// SPDX-License-Identifier: MIT
// Small text helpers shared by the parsers. Not part of the public API.
#pragma once

#include "holder/errors.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace holder {

/// Shortest decimal that round-trips to the same double.
inline std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

/// Parses a finite real; throws ParseError tagged with `line` otherwise.
inline double parse_real(std::string_view s, std::size_t line) {
    const std::string t = trim(s);
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') {
        ++begin;
    }
    auto res = std::from_chars(begin, end, v);
    if (t.empty() || res.ec != std::errc() || res.ptr != end) {
        throw ParseError(line, "malformed number '" + t + "'");
    }
    if (!std::isfinite(v)) {
        throw ParseError(line, "non-finite value '" + t + "'");
    }
    return v;
}

inline long long parse_integer(std::string_view s, std::size_t line) {
    const std::string t = trim(s);
    long long v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ParseError(line, "malformed integer '" + t + "'");
    }
    return v;
}

/// "0.5" -> {default_key: 0.5}; "c=1,p=2" -> {c: 1, p: 2}.
inline std::map<std::string, double> parse_key_values(std::string_view body, const std::string& default_key) {
    std::map<std::string, double> out;
    if (trim(body).empty()) {
        return out;
    }
    for (const auto& item : split(body, ',')) {
        const auto eq = item.find('=');
        std::string key = eq == std::string::npos ? default_key : trim(std::string_view(item).substr(0, eq));
        std::string value = eq == std::string::npos ? item : item.substr(eq + 1);
        double v = 0.0;
        try {
            v = parse_real(value, 0);
        } catch (const ParseError&) {
            throw ArgumentError("malformed parameter '" + item + "'");
        }
        if (!out.emplace(key, v).second) {
            throw ArgumentError("parameter '" + key + "' given twice");
        }
    }
    return out;
}

}  // namespace holder
