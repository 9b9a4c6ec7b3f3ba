// coarsen.hpp - per-trader flow states on a fixed time-slice grid
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "llsvn/common.hpp"
#include "llsvn/ingest.hpp"

namespace llsvn {

// Discrete trader state per slice. NA marks slices with no activity.
using State = std::int8_t;
inline constexpr State kStateBuy = 1;
inline constexpr State kStateSell = -1;
inline constexpr State kStateNeutral = 0;
inline constexpr State kStateNA = 2;

inline const char* state_name(State s) {
    switch (s) {
        case kStateBuy: return "+1";
        case kStateSell: return "-1";
        case kStateNeutral: return "0";
        default: return "NA";
    }
}

// Contiguous range of business days, expressed as ordinals into
// TradeSet::business_days.
struct DayRange {
    std::int32_t first_ord = 0;
    std::int32_t n_days = 0;
};

// Non-overlapping slices of length delta_t inside each day's session. When
// delta_t does not divide the session length, the trailing partial slice is
// dropped so all slices have identical length.
struct SliceGrid {
    SessionCalendar calendar;
    int delta_t_s = 0;
    int slices_per_day = 0;
    DayRange window;

    std::int64_t n_slices() const {
        return static_cast<std::int64_t>(window.n_days) * slices_per_day;
    }

    // -1 when the timestamp falls in the dropped trailing remainder.
    int slice_in_day(std::int64_t ms_of_day) const {
        std::int64_t rel = ms_of_day - static_cast<std::int64_t>(calendar.session_start_s) * kMsPerSec;
        std::int64_t k = rel / (static_cast<std::int64_t>(delta_t_s) * kMsPerSec);
        return k < slices_per_day ? static_cast<int>(k) : -1;
    }

    bool contains_day(std::int32_t day_ord) const {
        return day_ord >= window.first_ord && day_ord < window.first_ord + window.n_days;
    }

    // absolute slice id within the window
    std::int64_t slice_id(std::int32_t day_ord, int k) const {
        return static_cast<std::int64_t>(day_ord - window.first_ord) * slices_per_day + k;
    }
};

inline SliceGrid slice_grid(const SessionCalendar& cal, int delta_t_s, DayRange window) {
    if (delta_t_s <= 0) throw ConfigError("delta_t must be positive");
    if (delta_t_s > cal.session_len_s()) {
        throw ConfigError("delta_t " + std::to_string(delta_t_s) + "s exceeds session length " +
                          std::to_string(cal.session_len_s()) + "s; no slice fits");
    }
    SliceGrid g;
    g.calendar = cal;
    g.delta_t_s = delta_t_s;
    g.slices_per_day = cal.session_len_s() / delta_t_s;
    g.window = window;
    return g;
}

// Net volume v, turnover a and imbalance ratio rho = v/a of one (trader, slice)
// cell. rho is empty when the cell has no activity.
struct Imbalance {
    double v = 0.0;
    double a = 0.0;
    std::optional<double> rho;
};

inline Imbalance trader_imbalance(std::span<const double> volumes) {
    Imbalance r;
    for (double w : volumes) {
        r.v += w;
        r.a += std::abs(w);
    }
    if (r.a > 0.0) r.rho = r.v / r.a;
    return r;
}

// +1 above the dead zone, -1 below, 0 inside (boundary |rho| == rho0 counts as
// neutral), NA when rho is absent.
inline State assign_state(std::optional<double> rho, double rho0) {
    if (!rho) return kStateNA;
    if (*rho > rho0) return kStateBuy;
    if (*rho < -rho0) return kStateSell;
    return kStateNeutral;
}

// Dense traders x slices state matrix with per-cell net volume, turnover and
// trade counts. Row order matches TradeSet::traders.
struct StateMatrix {
    std::vector<std::string> trader_ids;
    std::int64_t n_slices = 0;
    SliceGrid grid;
    double rho0 = 0.0;
    std::vector<State> states;        // row-major [trader][slice]
    std::vector<double> v;
    std::vector<double> a;
    std::vector<std::int32_t> n_trades;

    std::size_t n_traders() const { return trader_ids.size(); }

    std::size_t cell(std::size_t trader, std::int64_t slice) const {
        return trader * static_cast<std::size_t>(n_slices) + static_cast<std::size_t>(slice);
    }

    std::span<const State> row(std::size_t trader) const {
        return {states.data() + trader * n_slices, static_cast<std::size_t>(n_slices)};
    }

    std::int64_t active_slices(std::size_t trader) const {
        std::int64_t n = 0;
        for (State s : row(trader)) n += (s != kStateNA);
        return n;
    }
};

inline StateMatrix state_matrix(const TradeSet& ts, const SliceGrid& grid, double rho0) {
    if (rho0 <= 0.0 || rho0 >= 1.0) throw ConfigError("rho0 must be in (0, 1)");
    StateMatrix sm;
    sm.grid = grid;
    sm.rho0 = rho0;
    sm.n_slices = grid.n_slices();
    sm.trader_ids.reserve(ts.n_traders());
    for (const auto& tr : ts.traders) sm.trader_ids.push_back(tr.id);

    const std::size_t n_cells = ts.n_traders() * static_cast<std::size_t>(sm.n_slices);
    sm.states.assign(n_cells, kStateNA);
    sm.v.assign(n_cells, 0.0);
    sm.a.assign(n_cells, 0.0);
    sm.n_trades.assign(n_cells, 0);

    for (std::size_t i = 0; i < ts.traders.size(); ++i) {
        for (const auto& t : ts.traders[i].trades) {
            if (!grid.contains_day(t.day_ord)) continue;
            int k = grid.slice_in_day(ms_of_day(t.timestamp_ms));
            if (k < 0) continue;
            std::size_t c = sm.cell(i, grid.slice_id(t.day_ord, k));
            sm.v[c] += t.volume;
            sm.a[c] += std::abs(t.volume);
            ++sm.n_trades[c];
        }
        for (std::int64_t s = 0; s < sm.n_slices; ++s) {
            std::size_t c = sm.cell(i, s);
            if (sm.a[c] > 0.0) {
                sm.states[c] = assign_state(sm.v[c] / sm.a[c], rho0);
            }
        }
    }
    return sm;
}

// Debug export: one row per active cell; NA cells are omitted.
inline void export_states(const StateMatrix& sm, std::ostream& out) {
    out << "trader_id,day,slice,state,v,a,n_trades\n";
    const int spd = sm.grid.slices_per_day;
    for (std::size_t i = 0; i < sm.n_traders(); ++i) {
        for (std::int64_t s = 0; s < sm.n_slices; ++s) {
            std::size_t c = sm.cell(i, s);
            if (sm.states[c] == kStateNA) continue;
            std::int64_t day = sm.grid.window.first_ord + s / spd;
            out << sm.trader_ids[i] << ',' << day << ',' << s % spd << ',' << state_name(sm.states[c])
                << ',' << format_double(sm.v[c]) << ',' << format_double(sm.a[c]) << ','
                << sm.n_trades[c] << '\n';
        }
    }
}

}  // namespace llsvn
