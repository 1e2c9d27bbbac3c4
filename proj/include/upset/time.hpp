#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace upset {

/// UTC instant at one-second resolution.
using Instant = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;
using Minutes = std::chrono::minutes;
using Hours = std::chrono::hours;

namespace detail {

inline bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

/// Parses an RFC-3339 timestamp such as `2014-06-12T20:00:00Z` or
/// `2014-06-12T22:00:00+02:00`. Fractional seconds are truncated.
inline std::optional<Instant> parse_rfc3339(std::string_view s) {
    using namespace std::chrono;
    int Y, M, D, h, m, sec;
    if (!detail::read_digits(s, 0, 4, Y) || s.size() < 19 || s[4] != '-' ||
        !detail::read_digits(s, 5, 2, M) || s[7] != '-' || !detail::read_digits(s, 8, 2, D) ||
        (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !detail::read_digits(s, 11, 2, h) ||
        s[13] != ':' || !detail::read_digits(s, 14, 2, m) || s[16] != ':' ||
        !detail::read_digits(s, 17, 2, sec))
        return std::nullopt;
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
    }
    if (pos >= s.size()) return std::nullopt;
    int offset_minutes = 0;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int oh, om;
        if (!detail::read_digits(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
            !detail::read_digits(s, pos + 4, 2, om))
            return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset_minutes = (s[pos] == '+' ? 1 : -1) * (oh * 60 + om);
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;
    if (h > 23 || m > 59 || sec > 60) return std::nullopt;

    year_month_day ymd{year{Y}, month{static_cast<unsigned>(M)}, day{static_cast<unsigned>(D)}};
    if (!ymd.ok()) return std::nullopt;
    Instant t = sys_days{ymd} + hours{h} + minutes{m} + seconds{sec};
    return t - minutes{offset_minutes};
}

/// Canonical form: `YYYY-MM-DDTHH:MM:SSZ`.
inline std::string format_rfc3339(Instant t) {
    using namespace std::chrono;
    auto day_start = floor<days>(t);
    year_month_day ymd{day_start};
    hh_mm_ss hms{t - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

}  // namespace upset
