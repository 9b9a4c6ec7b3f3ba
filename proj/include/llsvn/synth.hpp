// synth.hpp - synthetic market generator with planted groups and planted
// cross-timescale couplings, the ground-truth oracle for the pipeline
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "llsvn/common.hpp"
#include "llsvn/ingest.hpp"
#include "llsvn/leadlag.hpp"
#include "llsvn/timeutil.hpp"

namespace llsvn {

// Directed coupling: the target group copies the source group's aggregate
// direction, read over tau1 before each alignment time and echoed over tau2
// after it, with probability beta per alignment point.
struct SynthCoupling {
    int src_group = 0;
    int tau1_s = 3600;
    int dst_group = 0;
    int tau2_s = 600;
    double beta = 0.0;
};

struct SynthConfig {
    int n_traders = 50;
    std::vector<std::vector<int>> groups;  // disjoint trader-index sets
    double baseline_rate = 0.5;            // expected trades per trader per event slice
    double group_event_rate = 0.3;         // group-event probability per event slice
    double sync_prob = 0.9;                // chance a member trades the event direction
    double copy_gain = 1.0;                // echo intensity per source trade
    std::vector<SynthCoupling> couplings;
    int span_days = 30;                    // business days
    std::string start_date = "2024-01-01";
    int event_slice_s = 300;
    double vol_log_mean = 0.0;
    double vol_log_sd = 1.0;
    std::uint64_t seed = 1;
    CalendarConfig calendar;
};

struct PlantedTruth {
    std::vector<std::string> trader_ids;
    std::vector<std::vector<int>> groups;
    std::vector<SynthCoupling> couplings;
};

inline std::string synth_trader_id(int index, int n_traders) {
    std::size_t width = 3;
    for (int n = 1000; n < n_traders; n *= 10) ++width;
    std::string digits = std::to_string(index);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return "T" + digits;
}

inline void validate_synth_config(const SynthConfig& cfg, const SessionCalendar& cal) {
    if (cfg.n_traders <= 0) throw ConfigError("n_traders must be positive");
    if (cfg.span_days <= 0) throw ConfigError("span_days must be positive");
    if (cfg.baseline_rate < 0.0 || cfg.group_event_rate < 0.0 || cfg.copy_gain < 0.0) {
        throw ConfigError("rates must be nonnegative");
    }
    if (cfg.sync_prob < 0.0 || cfg.sync_prob > 1.0) throw ConfigError("sync_prob must be in [0, 1]");
    if (cfg.event_slice_s <= 0 || cal.session_len_s() % cfg.event_slice_s != 0) {
        throw ConfigError("event_slice_s must divide the session length");
    }
    if (cfg.vol_log_sd < 0.0) throw ConfigError("vol_log_sd must be nonnegative");
    std::vector<char> seen(static_cast<std::size_t>(cfg.n_traders), 0);
    for (const auto& g : cfg.groups) {
        if (g.empty()) throw ConfigError("planted groups must be non-empty");
        for (int m : g) {
            if (m < 0 || m >= cfg.n_traders) throw ConfigError("group member out of range");
            if (seen[static_cast<std::size_t>(m)]++) throw ConfigError("planted groups overlap");
        }
    }
    const int s = cal.session_len_s();
    for (const auto& c : cfg.couplings) {
        if (c.beta < 0.0 || c.beta > 1.0) throw ConfigError("coupling beta must be in [0, 1]");
        if (c.tau1_s <= 0 || c.tau2_s <= 0 || c.tau1_s > s || c.tau2_s > s) {
            throw ConfigError("coupling timescales must be in (0, session length]");
        }
        auto n_groups = static_cast<int>(cfg.groups.size());
        if (c.src_group < 0 || c.src_group >= n_groups || c.dst_group < 0 || c.dst_group >= n_groups) {
            throw ConfigError("coupling group out of range");
        }
    }
}

inline PlantedTruth planted_truth(const SynthConfig& cfg) {
    validate_synth_config(cfg, build_calendar(cfg.calendar));
    PlantedTruth t;
    for (int i = 0; i < cfg.n_traders; ++i) t.trader_ids.push_back(synth_trader_id(i, cfg.n_traders));
    t.groups = cfg.groups;
    t.couplings = cfg.couplings;
    return t;
}

namespace detail {

// Per-day sorted trade times with signed-volume prefix sums for one trader
// subset; supports interval aggregates during coupling generation.
class MemberTradeIndex {
public:
    MemberTradeIndex(const std::vector<Trade>& trades, std::size_t n_limit,
                     const std::vector<char>& is_member,
                     const std::map<std::string, int>& trader_index) {
        for (std::size_t i = 0; i < n_limit; ++i) {
            const Trade& t = trades[i];
            int idx = trader_index.at(t.trader_id);
            if (!is_member[static_cast<std::size_t>(idx)]) continue;
            days_[epoch_day_of_ms(t.timestamp_ms)].push_back({ms_of_day(t.timestamp_ms), t.volume});
        }
        for (auto& [day, recs] : days_) {
            std::sort(recs.begin(), recs.end());
            double v = 0.0;
            std::int64_t n = 0;
            prefix_[day].push_back({0.0, 0});
            for (const auto& [ms, vol] : recs) {
                v += vol;
                ++n;
                prefix_[day].push_back({v, n});
            }
        }
    }

    // net signed volume and trade count over [start_ms, end_ms) of the day
    std::pair<double, std::int64_t> net(std::int64_t epoch_day, std::int64_t start_ms,
                                        std::int64_t end_ms) const {
        auto it = days_.find(epoch_day);
        if (it == days_.end()) return {0.0, 0};
        const auto& recs = it->second;
        const auto& pre = prefix_.at(epoch_day);
        auto lo = std::lower_bound(recs.begin(), recs.end(), std::pair<std::int64_t, double>{start_ms, -1e300});
        auto hi = std::lower_bound(recs.begin(), recs.end(), std::pair<std::int64_t, double>{end_ms, -1e300});
        std::size_t a = static_cast<std::size_t>(lo - recs.begin());
        std::size_t b = static_cast<std::size_t>(hi - recs.begin());
        return {pre[b].first - pre[a].first, pre[b].second - pre[a].second};
    }

private:
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, double>>> days_;
    std::map<std::int64_t, std::vector<std::pair<double, std::int64_t>>> prefix_;
};

}  // namespace detail

// Two passes over a seeded RNG: first baseline Poisson trading plus group
// events, then coupling echoes whose source states are read from the first
// pass only. The draw order is fixed, so equal configs give equal trade sets.
inline TradeSet generate_market(const SynthConfig& cfg) {
    SessionCalendar cal = build_calendar(cfg.calendar);
    validate_synth_config(cfg, cal);

    std::vector<std::int64_t> days;
    for (std::int64_t d = parse_date(cfg.start_date); static_cast<int>(days.size()) < cfg.span_days;
         ++d) {
        if (cal.is_business_day(d)) days.push_back(d);
    }

    std::mt19937_64 rng(cfg.seed);
    // sigma 0 means constant volume; normal_distribution forbids it
    std::lognormal_distribution<double> lognorm(cfg.vol_log_mean,
                                                cfg.vol_log_sd > 0.0 ? cfg.vol_log_sd : 1.0);
    auto volume = [&](std::mt19937_64& g) {
        return cfg.vol_log_sd > 0.0 ? lognorm(g) : std::exp(cfg.vol_log_mean);
    };
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int slice_ms = cfg.event_slice_s * kMsPerSec;
    std::uniform_int_distribution<int> ms_in_slice(0, slice_ms - 1);
    const int n_slices = cal.session_len_s() / cfg.event_slice_s;
    const std::int64_t session_start_ms = std::int64_t(cal.session_start_s) * kMsPerSec;

    std::vector<std::string> ids;
    for (int i = 0; i < cfg.n_traders; ++i) ids.push_back(synth_trader_id(i, cfg.n_traders));

    std::vector<Trade> trades;
    for (std::int64_t day : days) {
        const std::int64_t day_ms = day * kMsPerDay;
        for (int s = 0; s < n_slices; ++s) {
            const std::int64_t slice_start = day_ms + session_start_ms + std::int64_t(s) * slice_ms;
            if (cfg.baseline_rate > 0.0) {
                std::poisson_distribution<int> burst(cfg.baseline_rate);
                for (int i = 0; i < cfg.n_traders; ++i) {
                    int n = burst(rng);
                    for (int k = 0; k < n; ++k) {
                        double sign = coin(rng) ? 1.0 : -1.0;
                        trades.push_back({ids[static_cast<std::size_t>(i)],
                                          slice_start + ms_in_slice(rng), sign * volume(rng)});
                    }
                }
            }
            for (const auto& group : cfg.groups) {
                if (u01(rng) >= cfg.group_event_rate) continue;
                double dir = coin(rng) ? 1.0 : -1.0;
                for (int m : group) {
                    double sign = u01(rng) < cfg.sync_prob ? dir : -dir;
                    trades.push_back({ids[static_cast<std::size_t>(m)],
                                      slice_start + ms_in_slice(rng), sign * volume(rng)});
                }
            }
        }
    }

    std::map<std::string, int> trader_index;
    for (int i = 0; i < cfg.n_traders; ++i) trader_index[ids[static_cast<std::size_t>(i)]] = i;

    const std::size_t n_pass1 = trades.size();
    for (const auto& c : cfg.couplings) {
        std::vector<char> is_member(static_cast<std::size_t>(cfg.n_traders), 0);
        for (int m : cfg.groups[static_cast<std::size_t>(c.src_group)]) {
            is_member[static_cast<std::size_t>(m)] = 1;
        }
        detail::MemberTradeIndex src_index(trades, n_pass1, is_member, trader_index);
        AlignmentGrid grid = alignment_grid(cal, c.tau1_s, c.tau2_s);
        const auto& members = cfg.groups[static_cast<std::size_t>(c.dst_group)];
        const double src_size = static_cast<double>(cfg.groups[static_cast<std::size_t>(c.src_group)].size());

        for (std::int64_t day : days) {
            for (int off : grid.offsets_s) {
                const std::int64_t t_ms = std::int64_t(cal.session_start_s + off) * kMsPerSec;
                auto [net_v, n_src] = src_index.net(day, t_ms - std::int64_t(c.tau1_s) * kMsPerSec, t_ms);
                if (net_v == 0.0) continue;
                if (u01(rng) >= c.beta) continue;
                double sign = net_v > 0.0 ? 1.0 : -1.0;
                std::poisson_distribution<int> extra(cfg.copy_gain * static_cast<double>(n_src) / src_size);
                std::uniform_int_distribution<int> ms_in_echo(0, c.tau2_s * kMsPerSec - 1);
                for (int m : members) {
                    int n = 1 + extra(rng);
                    for (int k = 0; k < n; ++k) {
                        trades.push_back({ids[static_cast<std::size_t>(m)],
                                          day * kMsPerDay + t_ms + ms_in_echo(rng), sign * volume(rng)});
                    }
                }
            }
        }
    }

    return filter_session(trades, cal);
}

// JSON export of the planted ground truth; groups are trader indices into
// trader_ids, couplings mirror the config records.
inline void export_truth(const PlantedTruth& truth, std::ostream& out) {
    nlohmann::json j;
    j["trader_ids"] = truth.trader_ids;
    j["groups"] = truth.groups;
    j["couplings"] = nlohmann::json::array();
    for (const auto& c : truth.couplings) {
        j["couplings"].push_back({{"src_group", c.src_group},
                                  {"tau1_s", c.tau1_s},
                                  {"dst_group", c.dst_group},
                                  {"tau2_s", c.tau2_s},
                                  {"beta", c.beta}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace llsvn
