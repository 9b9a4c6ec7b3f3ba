// leadlag.hpp - directed two-timescale lead-lag networks between trader groups
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "llsvn/coarsen.hpp"
#include "llsvn/common.hpp"
#include "llsvn/community.hpp"
#include "llsvn/ingest.hpp"
#include "llsvn/validate.hpp"

namespace llsvn {

// Within-day alignment scheme for a past timescale dt1 and future timescale
// dt2: observation times sit at multiples of dt_m = max(dt1, dt2) so that
// [t - dt1, t) and [t, t + dt2) both fit inside the session.
struct AlignmentGrid {
    int dt1_s = 0;
    int dt2_s = 0;
    int dt_m_s = 0;
    std::vector<int> offsets_s;  // seconds after session start, ascending

    std::size_t points_per_day() const { return offsets_s.size(); }
};

inline AlignmentGrid alignment_grid(const SessionCalendar& cal, int dt1_s, int dt2_s) {
    const int s = cal.session_len_s();
    if (dt1_s <= 0 || dt2_s <= 0) throw ConfigError("lead-lag timescales must be positive");
    if (dt1_s > s || dt2_s > s) {
        throw ConfigError("lead-lag timescale exceeds the session length " + std::to_string(s));
    }
    AlignmentGrid g;
    g.dt1_s = dt1_s;
    g.dt2_s = dt2_s;
    g.dt_m_s = std::max(dt1_s, dt2_s);
    for (int k = 1;; ++k) {
        std::int64_t t = static_cast<std::int64_t>(k) * g.dt_m_s;
        if (t + dt2_s > s) break;
        if (t - dt1_s < 0) continue;
        g.offsets_s.push_back(static_cast<int>(t));
    }
    return g;
}

// Absolute alignment times (ms) for one day.
inline std::vector<std::int64_t> alignment_points(const SessionCalendar& cal, std::int64_t epoch_day,
                                                  int dt1_s, int dt2_s) {
    AlignmentGrid g = alignment_grid(cal, dt1_s, dt2_s);
    std::vector<std::int64_t> out;
    std::int64_t day_start = epoch_day * kMsPerDay + std::int64_t(cal.session_start_s) * kMsPerSec;
    for (int off : g.offsets_s) out.push_back(day_start + std::int64_t(off) * kMsPerSec);
    return out;
}

// Per-group, per-day sorted trade times with prefix sums, for O(log n) state
// queries over arbitrary intra-day intervals.
class GroupIntervalIndex {
public:
    GroupIntervalIndex(const TradeSet& ts, const GroupPartition& part, DayRange window)
        : window_(window), n_groups_(part.n_groups()) {
        const std::size_t n_cells = n_groups_ * static_cast<std::size_t>(window.n_days);
        start_.assign(n_cells + 1, 0);

        struct Rec {
            std::int32_t ms;
            double vol;
        };
        std::vector<std::vector<Rec>> per_cell(n_cells);
        for (std::size_t g = 0; g < n_groups_; ++g) {
            for (int trader : part.groups[g]) {
                const auto& trades = ts.traders.at(static_cast<std::size_t>(trader)).trades;
                for (const auto& t : trades) {
                    std::int32_t local = t.day_ord - window.first_ord;
                    if (local < 0 || local >= window.n_days) continue;
                    per_cell[cell(g, local)].push_back(
                        {static_cast<std::int32_t>(ms_of_day(t.timestamp_ms)), t.volume});
                }
            }
        }
        for (auto& c : per_cell) {
            std::sort(c.begin(), c.end(), [](const Rec& a, const Rec& b) { return a.ms < b.ms; });
        }
        for (std::size_t c = 0; c < n_cells; ++c) start_[c + 1] = start_[c] + per_cell[c].size();
        times_.reserve(start_.back());
        pv_.reserve(start_.back() + 1);
        pa_.reserve(start_.back() + 1);
        pv_.push_back(0.0);
        pa_.push_back(0.0);
        // prefix sums run over the concatenated per-cell order
        for (std::size_t c = 0; c < n_cells; ++c) {
            for (const auto& r : per_cell[c]) {
                times_.push_back(r.ms);
                pv_.push_back(pv_.back() + r.vol);
                pa_.push_back(pa_.back() + std::abs(r.vol));
            }
        }
    }

    std::size_t n_groups() const { return n_groups_; }

    struct IntervalAggregate {
        double v = 0.0;
        double a = 0.0;
        std::int64_t n_trades = 0;
    };

    // [start_ms, end_ms) as ms-of-day, within the day at window-local index local_day
    IntervalAggregate aggregate(std::size_t group, std::int32_t local_day, std::int64_t start_ms,
                                std::int64_t end_ms) const {
        std::size_t c = cell(group, local_day);
        auto base = times_.begin() + static_cast<std::ptrdiff_t>(start_[c]);
        auto stop = times_.begin() + static_cast<std::ptrdiff_t>(start_[c + 1]);
        std::size_t lo = static_cast<std::size_t>(std::lower_bound(base, stop, start_ms) - times_.begin());
        std::size_t hi = static_cast<std::size_t>(std::lower_bound(base, stop, end_ms) - times_.begin());
        return {pv_[hi] - pv_[lo], pa_[hi] - pa_[lo], static_cast<std::int64_t>(hi - lo)};
    }

    State state(std::size_t group, std::int32_t local_day, std::int64_t start_ms, std::int64_t end_ms,
                double rho0) const {
        auto agg = aggregate(group, local_day, start_ms, end_ms);
        if (agg.a <= 0.0) return kStateNA;
        return assign_state(agg.v / agg.a, rho0);
    }

private:
    std::size_t cell(std::size_t group, std::int32_t local_day) const {
        return group * static_cast<std::size_t>(window_.n_days) + static_cast<std::size_t>(local_day);
    }

    DayRange window_;
    std::size_t n_groups_;
    std::vector<std::size_t> start_;
    std::vector<std::int32_t> times_;
    std::vector<double> pv_, pa_;
};

// Paired past/future group states across all alignment points of a window.
// Rows are groups, columns alignment points in (day, offset) order.
struct LeadLagObservations {
    int dt1_s = 0;
    int dt2_s = 0;
    std::size_t n_g1 = 0;
    std::size_t n_g2 = 0;
    std::int64_t n_points = 0;
    std::vector<State> past;    // [g1][point]
    std::vector<State> future;  // [g2][point]
    std::vector<std::int64_t> past_trades;
    std::vector<std::int64_t> future_trades;

    std::size_t cell(std::size_t group, std::int64_t point) const {
        return group * static_cast<std::size_t>(n_points) + static_cast<std::size_t>(point);
    }

    std::span<const State> past_row(std::size_t g) const {
        return {past.data() + g * static_cast<std::size_t>(n_points),
                static_cast<std::size_t>(n_points)};
    }

    std::span<const State> future_row(std::size_t g) const {
        return {future.data() + g * static_cast<std::size_t>(n_points),
                static_cast<std::size_t>(n_points)};
    }
};

// States are recomputed from member trades over the exact intervals
// [t - dt1, t) and [t, t + dt2), not resampled from any slice grid.
inline LeadLagObservations leadlag_observations(const TradeSet& ts, const GroupPartition& g1,
                                                const GroupPartition& g2, DayRange window, int dt1_s,
                                                int dt2_s, double rho0) {
    if (rho0 <= 0.0 || rho0 >= 1.0) throw ConfigError("rho0 must be in (0, 1)");
    AlignmentGrid grid = alignment_grid(ts.calendar, dt1_s, dt2_s);

    LeadLagObservations obs;
    obs.dt1_s = dt1_s;
    obs.dt2_s = dt2_s;
    obs.n_g1 = g1.n_groups();
    obs.n_g2 = g2.n_groups();
    obs.n_points = static_cast<std::int64_t>(grid.points_per_day()) * window.n_days;

    const std::size_t np = static_cast<std::size_t>(obs.n_points);
    obs.past.assign(obs.n_g1 * np, kStateNA);
    obs.future.assign(obs.n_g2 * np, kStateNA);
    obs.past_trades.assign(obs.n_g1 * np, 0);
    obs.future_trades.assign(obs.n_g2 * np, 0);
    if (obs.n_points == 0) return obs;

    GroupIntervalIndex idx1(ts, g1, window);
    GroupIntervalIndex idx2(ts, g2, window);
    const std::int64_t session_start_ms = std::int64_t(ts.calendar.session_start_s) * kMsPerSec;

    std::int64_t point = 0;
    for (std::int32_t d = 0; d < window.n_days; ++d) {
        for (int off : grid.offsets_s) {
            std::int64_t t_ms = session_start_ms + std::int64_t(off) * kMsPerSec;
            for (std::size_t g = 0; g < obs.n_g1; ++g) {
                auto agg = idx1.aggregate(g, d, t_ms - dt1_s * kMsPerSec, t_ms);
                std::size_t c = obs.cell(g, point);
                obs.past_trades[c] = agg.n_trades;
                if (agg.a > 0.0) obs.past[c] = assign_state(agg.v / agg.a, rho0);
            }
            for (std::size_t g = 0; g < obs.n_g2; ++g) {
                auto agg = idx2.aggregate(g, d, t_ms, t_ms + dt2_s * kMsPerSec);
                std::size_t c = obs.cell(g, point);
                obs.future_trades[c] = agg.n_trades;
                if (agg.a > 0.0) obs.future[c] = assign_state(agg.v / agg.a, rho0);
            }
            ++point;
        }
    }
    return obs;
}

struct LlLink {
    int src_group = 0;
    int dst_group = 0;
    State src_state = 0;
    State dst_state = 0;
    double p_value = 1.0;

    friend bool operator==(const LlLink&, const LlLink&) = default;
};

struct LeadLagNetwork {
    int window_id = 0;
    int dt1_s = 0;
    int dt2_s = 0;
    std::size_t n_g1 = 0;
    std::size_t n_g2 = 0;
    std::vector<LlLink> links;  // sorted by (src, dst, src_state, dst_state)
    double fdr_alpha = 0.05;
    std::optional<double> threshold;
    std::size_t m_tests = 0;
};

struct LlOptions {
    double fdr_alpha = 0.05;
    bool pool_state_pairs = true;  // one BH family across all 9 state pairs
};

inline constexpr State kLlStates[3] = {kStateBuy, kStateSell, kStateNeutral};

// Directed validation: every (leading group, lagging group) pair is tested for
// all 9 state combinations over the alignment points. All m = |G1|*|G2|*9
// tests enter the BH family (margin-zero tests contribute p = 1).
inline LeadLagNetwork build_llsvn(const LeadLagObservations& obs, const LlOptions& opts = {}) {
    if (obs.n_g1 == 0 || obs.n_g2 == 0) throw DataError("build_llsvn: empty group set");
    if (obs.n_points <= 0) throw DataError("build_llsvn: no alignment points");
    if (opts.fdr_alpha <= 0.0 || opts.fdr_alpha >= 1.0) throw ConfigError("fdr alpha must be in (0, 1)");

    const std::size_t n_bits = static_cast<std::size_t>(obs.n_points);
    auto masks_of = [&](const std::vector<State>& flat, std::size_t n_rows) {
        std::vector<detail::Bitset> m(n_rows * 3, detail::Bitset(n_bits));
        for (std::size_t g = 0; g < n_rows; ++g) {
            const State* row = flat.data() + g * n_bits;
            for (std::size_t k = 0; k < n_bits; ++k) {
                for (int y = 0; y < 3; ++y) {
                    if (row[k] == kLlStates[y]) m[g * 3 + static_cast<std::size_t>(y)].set(k);
                }
            }
        }
        return m;
    };
    auto past_masks = masks_of(obs.past, obs.n_g1);
    auto future_masks = masks_of(obs.future, obs.n_g2);
    std::vector<std::int64_t> past_counts(obs.n_g1 * 3), future_counts(obs.n_g2 * 3);
    for (std::size_t k = 0; k < past_counts.size(); ++k) past_counts[k] = past_masks[k].popcount();
    for (std::size_t k = 0; k < future_counts.size(); ++k) future_counts[k] = future_masks[k].popcount();

    LogFactTable table(obs.n_points);
    LeadLagNetwork net;
    net.dt1_s = obs.dt1_s;
    net.dt2_s = obs.dt2_s;
    net.n_g1 = obs.n_g1;
    net.n_g2 = obs.n_g2;
    net.fdr_alpha = opts.fdr_alpha;

    struct Test {
        LlLink link;
        int sy, dy;  // state symbol indices, for per-pair families
    };
    std::vector<Test> tests;
    tests.reserve(obs.n_g1 * obs.n_g2 * 9);
    for (std::size_t a = 0; a < obs.n_g1; ++a) {
        for (std::size_t b = 0; b < obs.n_g2; ++b) {
            for (int sy = 0; sy < 3; ++sy) {
                for (int dy = 0; dy < 3; ++dy) {
                    std::int64_t np = past_counts[a * 3 + static_cast<std::size_t>(sy)];
                    std::int64_t nq = future_counts[b * 3 + static_cast<std::size_t>(dy)];
                    std::int64_t npq = detail::and_popcount(past_masks[a * 3 + static_cast<std::size_t>(sy)],
                                                            future_masks[b * 3 + static_cast<std::size_t>(dy)]);
                    double p = hypergeom_pvalue(obs.n_points, np, nq, npq, &table);
                    tests.push_back({{static_cast<int>(a), static_cast<int>(b), kLlStates[sy],
                                      kLlStates[dy], p},
                                     sy,
                                     dy});
                }
            }
        }
    }

    net.m_tests = tests.size();
    if (opts.pool_state_pairs) {
        std::vector<double> ps;
        ps.reserve(tests.size());
        for (const auto& t : tests) ps.push_back(t.link.p_value);
        BhResult bh = bh_threshold(ps, opts.fdr_alpha, tests.size());
        net.threshold = bh.threshold;
        for (std::size_t k = 0; k < tests.size(); ++k) {
            if (bh.reject[k]) net.links.push_back(tests[k].link);
        }
    } else {
        // nine separate BH families, one per (past state, future state)
        for (int sy = 0; sy < 3; ++sy) {
            for (int dy = 0; dy < 3; ++dy) {
                std::vector<double> ps;
                std::vector<std::size_t> which;
                for (std::size_t k = 0; k < tests.size(); ++k) {
                    if (tests[k].sy == sy && tests[k].dy == dy) {
                        ps.push_back(tests[k].link.p_value);
                        which.push_back(k);
                    }
                }
                BhResult bh = bh_threshold(ps, opts.fdr_alpha, ps.size());
                for (std::size_t k = 0; k < which.size(); ++k) {
                    if (bh.reject[k]) net.links.push_back(tests[which[k]].link);
                }
            }
        }
    }

    std::sort(net.links.begin(), net.links.end(), [](const LlLink& a, const LlLink& b) {
        return std::tie(a.src_group, a.dst_group, a.src_state, a.dst_state) <
               std::tie(b.src_group, b.dst_group, b.src_state, b.dst_state);
    });
    return net;
}

struct LinkTaxonomy {
    std::size_t n_links = 0;
    std::size_t n_self = 0;
    std::size_t n_cross = 0;
    std::size_t n_groups_only_self = 0;
    std::size_t n_dual = 0;  // (src, src_state, dst) triples counted pairwise over distinct dst states
};

inline LinkTaxonomy classify_links(const LeadLagNetwork& net) {
    LinkTaxonomy tax;
    tax.n_links = net.links.size();
    std::map<int, std::pair<std::size_t, std::size_t>> group_links;  // group -> (self, total)
    std::map<std::tuple<int, State, int>, std::set<State>> fanout;
    for (const auto& l : net.links) {
        bool self = l.src_group == l.dst_group;
        tax.n_self += self;
        tax.n_cross += !self;
        auto& [s_src, t_src] = group_links[l.src_group];
        s_src += self;
        ++t_src;
        if (!self) ++group_links[l.dst_group].second;
        fanout[{l.src_group, l.src_state, l.dst_group}].insert(l.dst_state);
    }
    for (const auto& [g, counts] : group_links) {
        if (counts.second > 0 && counts.first == counts.second) ++tax.n_groups_only_self;
    }
    for (const auto& [key, states] : fanout) {
        std::size_t c = states.size();
        tax.n_dual += c * (c - 1) / 2;
    }
    return tax;
}

// CSV export: window_id,dt1,dt2,src_group,src_state,dst_group,dst_state,p_value
inline void export_llsvn(const LeadLagNetwork& net, std::ostream& out) {
    out << "window_id,dt1,dt2,src_group,src_state,dst_group,dst_state,p_value\n";
    for (const auto& l : net.links) {
        out << net.window_id << ',' << net.dt1_s << ',' << net.dt2_s << ',' << l.src_group << ','
            << state_name(l.src_state) << ',' << l.dst_group << ',' << state_name(l.dst_state) << ','
            << format_double(l.p_value) << '\n';
    }
}

}  // namespace llsvn
