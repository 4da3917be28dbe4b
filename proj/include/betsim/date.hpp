#pragma once

#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace betsim {

// Calendar day. Matches are tallied per day, so this is the only time unit
// the engine knows about.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const {
        if (month < 1 || month > 12 || day < 1) return false;
        static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        int len = lengths[month - 1];
        if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))) len = 29;
        return day <= len;
    }

    // Days since 1970-01-01 (civil calendar), for skip-window arithmetic.
    long day_number() const {
        int y = year - (month <= 2);
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy =
            (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
            static_cast<unsigned>(day) - 1u;
        const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
        return era * 146097L + static_cast<long>(doe) - 719468L;
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    // Parses YYYY-MM-DD; returns nullopt on anything else.
    static std::optional<Date> parse(std::string_view text) {
        if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
        auto digits = [&](std::size_t pos, std::size_t len, int& out) {
            out = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                if (text[i] < '0' || text[i] > '9') return false;
                out = out * 10 + (text[i] - '0');
            }
            return true;
        };
        Date d;
        if (!digits(0, 4, d.year) || !digits(5, 2, d.month) || !digits(8, 2, d.day))
            return std::nullopt;
        if (!d.valid()) return std::nullopt;
        return d;
    }
};

}  // namespace betsim
