#pragma once

#include <charconv>
#include <compare>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dancehit {

namespace detail {
inline bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}
}  // namespace detail

// Calendar date; ordering is chronological.
class Date {
public:
    Date() = default;
    Date(int year, int month, int day) : y_(year), m_(month), d_(day) {
        if (!valid(year, month, day))
            throw std::invalid_argument("Date: invalid calendar date");
    }

    // Accepts ISO-8601 `YYYY-MM-DD`; falls back to `DD/MM/YY` with century
    // pivot 1970 (70-99 -> 19xx, 00-69 -> 20xx).
    static std::optional<Date> parse(std::string_view s) {
        int a = 0, b = 0, c = 0;
        if (s.size() >= 8 && s.find('-') != std::string_view::npos) {
            auto p1 = s.find('-');
            auto p2 = s.find('-', p1 + 1);
            if (p2 == std::string_view::npos) return std::nullopt;
            if (!detail::parse_int(s.substr(0, p1), a) ||
                !detail::parse_int(s.substr(p1 + 1, p2 - p1 - 1), b) ||
                !detail::parse_int(s.substr(p2 + 1), c))
                return std::nullopt;
            if (!valid(a, b, c)) return std::nullopt;
            return Date(a, b, c);
        }
        if (s.find('/') != std::string_view::npos) {
            auto p1 = s.find('/');
            auto p2 = s.find('/', p1 + 1);
            if (p2 == std::string_view::npos) return std::nullopt;
            if (!detail::parse_int(s.substr(0, p1), a) ||
                !detail::parse_int(s.substr(p1 + 1, p2 - p1 - 1), b) ||
                !detail::parse_int(s.substr(p2 + 1), c))
                return std::nullopt;
            auto yy = s.substr(p2 + 1);
            int year = c;
            if (yy.size() <= 2) year = c >= 70 ? 1900 + c : 2000 + c;
            if (!valid(year, b, a)) return std::nullopt;
            return Date(year, b, a);
        }
        return std::nullopt;
    }

    int year() const { return y_; }
    int month() const { return m_; }
    int day() const { return d_; }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y_, m_, d_);
        return buf;
    }

    auto operator<=>(const Date&) const = default;

    static bool valid(int y, int m, int d) {
        if (y < 1 || m < 1 || m > 12 || d < 1) return false;
        static constexpr int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        int days = len[m - 1];
        bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        if (m == 2 && leap) days = 29;
        return d <= days;
    }

private:
    int y_ = 1970;
    int m_ = 1;
    int d_ = 1;
};

}  // namespace dancehit
