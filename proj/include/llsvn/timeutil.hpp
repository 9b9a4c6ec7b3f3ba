// timeutil.hpp - civil date arithmetic and time-of-day parsing
#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "llsvn/common.hpp"

namespace llsvn {

inline constexpr std::int64_t kMsPerDay = 86400000;
inline constexpr std::int64_t kMsPerSec = 1000;

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// algorithm).
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {static_cast<int>(y + (m <= 2)), m, d};
}

// 0 = Monday .. 6 = Sunday. 1970-01-01 was a Thursday.
inline int weekday_of(std::int64_t epoch_day) {
    std::int64_t w = (epoch_day + 3) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

inline std::int64_t epoch_day_of_ms(std::int64_t ts_ms) {
    std::int64_t d = ts_ms / kMsPerDay;
    if (ts_ms % kMsPerDay < 0) --d;
    return d;
}

inline std::int64_t ms_of_day(std::int64_t ts_ms) {
    return ts_ms - epoch_day_of_ms(ts_ms) * kMsPerDay;
}

// "YYYY-MM-DD" -> epoch day.
inline std::int64_t parse_date(std::string_view s) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (std::sscanf(std::string(s).c_str(), "%d-%u-%u", &y, &m, &d) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31) {
        throw ConfigError("invalid date '" + std::string(s) + "', expected YYYY-MM-DD");
    }
    return days_from_civil(y, m, d);
}

inline std::string format_date(std::int64_t epoch_day) {
    CivilDate c = civil_from_days(epoch_day);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return std::string(buf);
}

// "HH:MM:SS" (or "HH:MM") -> seconds of day.
inline int parse_time_of_day(std::string_view s) {
    unsigned h = 0, m = 0, sec = 0;
    int n = std::sscanf(std::string(s).c_str(), "%u:%u:%u", &h, &m, &sec);
    if (n < 2 || h > 24 || m > 59 || sec > 59) {
        throw ConfigError("invalid time of day '" + std::string(s) + "', expected HH:MM:SS");
    }
    return static_cast<int>(h * 3600 + m * 60 + sec);
}

}  // namespace llsvn
