// ingest.hpp - trade records, session calendar, session filtering
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "llsvn/common.hpp"
#include "llsvn/timeutil.hpp"

namespace llsvn {

// One trade event. Positive volume = buy, negative = sell.
struct Trade {
    std::string trader_id;
    std::int64_t timestamp_ms = 0;  // UTC milliseconds since epoch
    double volume = 0.0;
};

// Daily trading session [session_start, session_end) on business days.
struct SessionCalendar {
    int session_start_s = 9 * 3600;
    int session_end_s = 17 * 3600;
    // bit k set = weekday k (0 = Monday) is a business day; default Mon-Fri
    unsigned business_day_mask = 0x1f;
    std::set<std::int64_t> holidays;  // epoch days

    int session_len_s() const { return session_end_s - session_start_s; }

    bool is_business_day(std::int64_t epoch_day) const {
        if (!(business_day_mask >> weekday_of(epoch_day) & 1u)) return false;
        return holidays.find(epoch_day) == holidays.end();
    }

    bool in_session(std::int64_t ms_of_day) const {
        return ms_of_day >= static_cast<std::int64_t>(session_start_s) * kMsPerSec &&
               ms_of_day < static_cast<std::int64_t>(session_end_s) * kMsPerSec;
    }

    bool contains(std::int64_t ts_ms) const {
        return is_business_day(epoch_day_of_ms(ts_ms)) && in_session(llsvn::ms_of_day(ts_ms));
    }
};

struct CalendarConfig {
    std::string session_start = "09:00:00";
    std::string session_end = "17:00:00";
    std::vector<std::string> holidays;
};

inline SessionCalendar build_calendar(const CalendarConfig& cfg) {
    SessionCalendar cal;
    cal.session_start_s = parse_time_of_day(cfg.session_start);
    cal.session_end_s = parse_time_of_day(cfg.session_end);
    if (cal.session_end_s <= cal.session_start_s) {
        throw ConfigError("session_end must be after session_start");
    }
    for (const auto& h : cfg.holidays) cal.holidays.insert(parse_date(h));
    return cal;
}

// A trade kept after session filtering. day_ord indexes TradeSet::business_days.
struct SessionTrade {
    std::int64_t timestamp_ms = 0;
    double volume = 0.0;
    std::int32_t day_ord = 0;
};

struct TraderSeries {
    std::string id;
    std::vector<SessionTrade> trades;  // non-decreasing in timestamp
};

// Session-filtered trades grouped by trader (ids sorted), immutable once built.
struct TradeSet {
    SessionCalendar calendar;
    std::vector<TraderSeries> traders;
    std::vector<std::int64_t> business_days;  // ascending epoch days, span of the data

    std::size_t n_traders() const { return traders.size(); }
    std::size_t n_days() const { return business_days.size(); }

    std::size_t n_trades() const {
        std::size_t n = 0;
        for (const auto& t : traders) n += t.trades.size();
        return n;
    }

    int trader_index(std::string_view id) const {
        auto it = std::lower_bound(traders.begin(), traders.end(), id,
                                   [](const TraderSeries& a, std::string_view b) { return a.id < b; });
        if (it == traders.end() || it->id != id) return -1;
        return static_cast<int>(it - traders.begin());
    }
};

struct ParsedTrades {
    std::vector<Trade> trades;
    std::vector<std::string> warnings;
};

namespace detail {

inline bool parse_int64(std::string_view s, std::int64_t& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_real(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

// Parses the trade CSV `trader_id,timestamp_ms,volume`. The header line is
// required; extra columns are ignored with a warning. Malformed rows and
// zero-volume rows raise ParseError with the offending line number.
inline ParsedTrades parse_trades(std::istream& in) {
    ParsedTrades out;
    std::string line;
    std::size_t lineno = 0;
    bool warned_extra = false;

    if (!std::getline(in, line)) throw DataError("empty trade input, expected a header line");
    ++lineno;
    auto header = split(trim(line), ',');
    if (header.size() < 3 || trim(header[0]) != "trader_id" || trim(header[1]) != "timestamp_ms" ||
        trim(header[2]) != "volume") {
        throw ParseError(lineno, "expected header 'trader_id,timestamp_ms,volume'");
    }
    if (header.size() > 3 && !warned_extra) {
        out.warnings.push_back("ignoring " + std::to_string(header.size() - 3) +
                               " extra column(s) after 'volume'");
        warned_extra = true;
    }

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto fields = split(sv, ',');
        if (fields.size() < 3) throw ParseError(lineno, "expected 3 fields, got " + std::to_string(fields.size()));

        Trade t;
        t.trader_id = std::string(trim(fields[0]));
        if (t.trader_id.empty()) throw ParseError(lineno, "empty trader_id");
        if (!detail::parse_int64(fields[1], t.timestamp_ms)) {
            throw ParseError(lineno, "invalid timestamp_ms '" + std::string(trim(fields[1])) + "'");
        }
        if (!detail::parse_real(fields[2], t.volume)) {
            throw ParseError(lineno, "invalid volume '" + std::string(trim(fields[2])) + "'");
        }
        if (t.volume == 0.0) throw ParseError(lineno, "zero volume rejected");
        out.trades.push_back(std::move(t));
    }
    return out;
}

inline ParsedTrades parse_trades(const std::string& text) {
    std::istringstream in(text);
    return parse_trades(in);
}

// Keeps trades inside the session on business days, groups them by trader and
// sorts each trader's trades by time. Idempotent.
inline TradeSet filter_session(const std::vector<Trade>& trades, const SessionCalendar& cal) {
    TradeSet ts;
    ts.calendar = cal;

    std::map<std::string, std::vector<std::pair<std::int64_t, double>>> by_trader;
    std::int64_t day_min = 0, day_max = -1;
    bool any = false;
    for (const auto& t : trades) {
        if (!cal.contains(t.timestamp_ms)) continue;
        by_trader[t.trader_id].emplace_back(t.timestamp_ms, t.volume);
        std::int64_t day = epoch_day_of_ms(t.timestamp_ms);
        if (!any) {
            day_min = day_max = day;
            any = true;
        } else {
            day_min = std::min(day_min, day);
            day_max = std::max(day_max, day);
        }
    }
    if (!any) return ts;

    for (std::int64_t d = day_min; d <= day_max; ++d) {
        if (cal.is_business_day(d)) ts.business_days.push_back(d);
    }
    std::map<std::int64_t, std::int32_t> day_ord;
    for (std::size_t i = 0; i < ts.business_days.size(); ++i) {
        day_ord[ts.business_days[i]] = static_cast<std::int32_t>(i);
    }

    ts.traders.reserve(by_trader.size());
    for (auto& [id, rows] : by_trader) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        TraderSeries series;
        series.id = id;
        series.trades.reserve(rows.size());
        for (auto& [tsms, vol] : rows) {
            series.trades.push_back({tsms, vol, day_ord.at(epoch_day_of_ms(tsms))});
        }
        ts.traders.push_back(std::move(series));
    }
    return ts;
}

// Writes the trade CSV back out (trader-id order, time order within trader).
// Volumes use 17 significant digits so parse_trades round-trips exactly.
inline void serialize_trades(const TradeSet& ts, std::ostream& out) {
    out << "trader_id,timestamp_ms,volume\n";
    for (const auto& tr : ts.traders) {
        for (const auto& t : tr.trades) {
            out << tr.id << ',' << t.timestamp_ms << ',' << format_double(t.volume) << '\n';
        }
    }
}

inline std::string serialize_trades(const TradeSet& ts) {
    std::ostringstream out;
    serialize_trades(ts, out);
    return out.str();
}

// Reflects each trade's time of day inside its own session day:
//   t' = session_start + session_end - 1ms - t.
// Millisecond timestamps map bijectively onto the session, so running the
// pipeline on the reversed set with swapped timescales transposes lead-lag
// links exactly.
inline TradeSet time_reverse_within_day(const TradeSet& ts) {
    const std::int64_t s_ms = static_cast<std::int64_t>(ts.calendar.session_start_s) * kMsPerSec;
    const std::int64_t e_ms = static_cast<std::int64_t>(ts.calendar.session_end_s) * kMsPerSec;
    std::vector<Trade> flipped;
    flipped.reserve(ts.n_trades());
    for (const auto& tr : ts.traders) {
        for (const auto& t : tr.trades) {
            std::int64_t day_ms = epoch_day_of_ms(t.timestamp_ms) * kMsPerDay;
            std::int64_t tod = t.timestamp_ms - day_ms;
            flipped.push_back({tr.id, day_ms + s_ms + e_ms - 1 - tod, t.volume});
        }
    }
    return filter_session(flipped, ts.calendar);
}

}  // namespace llsvn
