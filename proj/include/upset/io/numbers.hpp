#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace upset::io {

/// General reals: 6 significant digits.
inline std::string format_sig6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// Odds: 4 decimal places.
inline std::string format_odds(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

/// Probabilities in reports: 6 decimal places.
inline std::string format_prob(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    std::string tmp(s);
    char* end = nullptr;
    double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size()) return std::nullopt;
    return v;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Value after a write/read round trip at 6 significant digits.
inline double quantize_sig6(double x) { return *parse_double(format_sig6(x)); }

/// Value after a write/read round trip at 4 decimals.
inline double quantize_odds(double x) { return *parse_double(format_odds(x)); }

}  // namespace upset::io
