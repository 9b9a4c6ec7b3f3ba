// sweep.hpp - rolling-window x timescale-grid orchestration. Grouping
// partitions are computed once per (window, delta_t) and shared by every
// timescale pair touching that delta_t; lead-lag cells are then filled in
// parallel with one preallocated slot per (window, ordered pair), so the
// result is bit-identical for any worker count.
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "llsvn/community.hpp"
#include "llsvn/leadlag.hpp"
#include "llsvn/stats.hpp"
#include "llsvn/validate.hpp"

namespace llsvn {

struct CalibrationWindow {
    std::int32_t index = 0;
    std::int32_t start_ord = 0;  // ordinal into the trade set's business days
    std::int32_t t_in_days = 0;

    DayRange days() const { return {start_ord, t_in_days}; }
    bool operator==(const CalibrationWindow&) const = default;
};

// Windows [d, d + t_in) for d = 0, step, 2*step, ... while fully inside the
// span of business days.
inline std::vector<CalibrationWindow> rolling_windows(std::int64_t span_days, int t_in_days,
                                                      int step_days) {
    if (t_in_days <= 0) throw ConfigError("rolling_windows: window length must be positive");
    if (step_days <= 0) throw ConfigError("rolling_windows: step must be positive");
    if (span_days < t_in_days) {
        throw DataError("rolling_windows: span of " + std::to_string(span_days) +
                        " days is shorter than the window length " + std::to_string(t_in_days));
    }
    std::vector<CalibrationWindow> out;
    for (std::int64_t d = 0; d + t_in_days <= span_days; d += step_days) {
        out.push_back({static_cast<std::int32_t>(out.size()), static_cast<std::int32_t>(d),
                       static_cast<std::int32_t>(t_in_days)});
    }
    return out;
}

struct TimescaleGrid {
    int min_s = 0;
    int max_s = 0;
    int step_s = 0;
    std::vector<int> values;
    std::vector<std::pair<int, int>> unordered_pairs;  // (a, b) with a <= b, diagonal included
    std::vector<std::pair<int, int>> ordered_pairs;    // all n^2, row-major in value order

    std::size_t n_values() const { return values.size(); }

    int index_of(int dt_s) const {
        if (step_s <= 0 || dt_s < min_s || dt_s > max_s || (dt_s - min_s) % step_s != 0) return -1;
        return (dt_s - min_s) / step_s;
    }
};

inline TimescaleGrid timescale_grid(int min_s = 300, int max_s = 14400, int step_s = 300) {
    if (min_s <= 0) throw ConfigError("timescale_grid: minimum must be positive");
    if (min_s > max_s) throw ConfigError("timescale_grid: minimum exceeds maximum");
    if (step_s <= 0) throw ConfigError("timescale_grid: step must be positive");
    if ((max_s - min_s) % step_s != 0) {
        throw ConfigError("timescale_grid: step does not divide the range");
    }
    TimescaleGrid g;
    g.min_s = min_s;
    g.max_s = max_s;
    g.step_s = step_s;
    for (int v = min_s; v <= max_s; v += step_s) g.values.push_back(v);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        for (std::size_t j = i; j < g.values.size(); ++j) {
            g.unordered_pairs.push_back({g.values[i], g.values[j]});
        }
    }
    for (int a : g.values) {
        for (int b : g.values) g.ordered_pairs.push_back({a, b});
    }
    return g;
}

struct SweepCell {
    std::int32_t window = 0;
    int dt1_s = 0;
    int dt2_s = 0;
    std::int64_t n_links = 0;
    std::int64_t n_self = 0;
    std::int64_t n_cross = 0;
    std::int64_t n_groups_only_self = 0;
    std::int64_t n_dual = 0;
    std::int64_t m_tests = 0;
    std::optional<double> threshold;
    std::optional<double> rho_n;
    std::int64_t rho_pairs_used = 0;

    bool operator==(const SweepCell&) const = default;
};

struct SweepOptions {
    int t_in_days = 30;
    int window_step_days = 5;
    int grid_min_s = 300;
    int grid_max_s = 14400;
    int grid_step_s = 300;
    double rho0 = 0.01;
    double fdr_alpha = 0.05;
    std::uint64_t seed = 1;
    int threads = 1;  // 0 picks the hardware concurrency
    int min_active_slices = 10;
    bool pool_state_pairs = true;
    bool pool_observations = false;
    int community_restarts = 10;
};

inline std::string sweep_options_hash(const SweepOptions& o) {
    std::ostringstream s;
    s << o.t_in_days << '|' << o.window_step_days << '|' << o.grid_min_s << '|' << o.grid_max_s
      << '|' << o.grid_step_s << '|' << format_double(o.rho0) << '|' << format_double(o.fdr_alpha)
      << '|' << o.seed << '|' << o.min_active_slices << '|' << o.pool_state_pairs << '|'
      << o.pool_observations << '|' << o.community_restarts;
    return to_hex(fnv1a64(s.str()));
}

struct SweepResult {
    TimescaleGrid grid;
    std::vector<CalibrationWindow> windows;
    std::vector<SweepCell> cells;          // [window][dt1 index][dt2 index]
    std::vector<SvnSummary> svn_summaries; // [window][dt index]
    std::vector<GroupPartition> partitions;  // same layout; in-memory only
    std::uint64_t seed = 0;
    std::string config_hash;

    std::size_t n_windows() const { return windows.size(); }
    std::size_t n_dt() const { return grid.values.size(); }

    const SweepCell& cell(std::size_t window, int dt1_s, int dt2_s) const {
        const int i1 = grid.index_of(dt1_s);
        const int i2 = grid.index_of(dt2_s);
        if (window >= windows.size() || i1 < 0 || i2 < 0) {
            throw DataError("sweep cell (" + std::to_string(window) + ", " + std::to_string(dt1_s) +
                            ", " + std::to_string(dt2_s) + ") is outside the sweep");
        }
        return cells[(window * n_dt() + static_cast<std::size_t>(i1)) * n_dt() +
                     static_cast<std::size_t>(i2)];
    }

    const SvnSummary& summary(std::size_t window, int dt_s) const {
        const int i = grid.index_of(dt_s);
        if (window >= windows.size() || i < 0) {
            throw DataError("sweep summary (" + std::to_string(window) + ", " +
                            std::to_string(dt_s) + ") is outside the sweep");
        }
        return svn_summaries[window * n_dt() + static_cast<std::size_t>(i)];
    }

    const GroupPartition& partition(std::size_t window, int dt_s) const {
        const int i = grid.index_of(dt_s);
        if (window >= windows.size() || i < 0 || partitions.empty()) {
            throw DataError("sweep partition (" + std::to_string(window) + ", " +
                            std::to_string(dt_s) + ") is outside the sweep");
        }
        return partitions[window * n_dt() + static_cast<std::size_t>(i)];
    }
};

namespace detail {

// Runs fn(0..n-1) over a pool. Worker errors are collected and the one with
// the smallest task index is rethrown so failures are deterministic too.
template <typename Fn, typename Describe>
inline void run_tasks(std::size_t n, int threads, Fn&& fn, Describe&& describe) {
    int n_threads = threads;
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (n_threads > static_cast<int>(n) && n > 0) n_threads = static_cast<int>(n);

    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::vector<std::pair<std::size_t, std::string>> errors;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                fn(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                errors.emplace_back(i, e.what());
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end());
        throw DataError(describe(errors.front().first) + ": " + errors.front().second);
    }
}

inline std::uint64_t sweep_task_seed(std::uint64_t seed, std::size_t window, int dt_s) {
    return fnv1a64_mix(fnv1a64_mix(seed, static_cast<std::uint64_t>(window) + 1),
                       static_cast<std::uint64_t>(dt_s));
}

}  // namespace detail

inline SweepResult run_sweep(const TradeSet& ts, const SweepOptions& opts) {
    if (ts.n_traders() < 2) throw DataError("run_sweep: need at least two traders");
    if (opts.grid_max_s > ts.calendar.session_len_s()) {
        throw ConfigError("run_sweep: grid maximum exceeds the session length");
    }

    SweepResult res;
    res.grid = timescale_grid(opts.grid_min_s, opts.grid_max_s, opts.grid_step_s);
    res.windows = rolling_windows(static_cast<std::int64_t>(ts.n_days()), opts.t_in_days,
                                  opts.window_step_days);
    res.seed = opts.seed;
    res.config_hash = sweep_options_hash(opts);

    const std::size_t n_w = res.windows.size();
    const std::size_t n_dt = res.grid.n_values();
    res.svn_summaries.assign(n_w * n_dt, {});
    res.partitions.assign(n_w * n_dt, {});
    res.cells.assign(n_w * n_dt * n_dt, {});

    SvnOptions svn_opts;
    svn_opts.fdr_alpha = opts.fdr_alpha;
    svn_opts.min_active_slices = opts.min_active_slices;
    CommunityOptions comm_opts;
    comm_opts.n_restarts = opts.community_restarts;
    LlOptions ll_opts;
    ll_opts.fdr_alpha = opts.fdr_alpha;
    ll_opts.pool_state_pairs = opts.pool_state_pairs;
    RhoOptions rho_opts;
    rho_opts.pool_observations = opts.pool_observations;

    // grouping stage: one partition per (window, delta_t)
    detail::run_tasks(
        n_w * n_dt, opts.threads,
        [&](std::size_t task) {
            const std::size_t w = task / n_dt;
            const std::size_t d = task % n_dt;
            const int dt = res.grid.values[d];
            const auto& win = res.windows[w];
            auto sg = slice_grid(ts.calendar, dt, win.days());
            auto sm = state_matrix(ts, sg, opts.rho0);
            auto svn = build_svn(sm, svn_opts);
            svn.window_id = win.index;
            auto part = detect_communities(svn, detail::sweep_task_seed(opts.seed, w, dt), comm_opts);
            res.svn_summaries[task] = svn_summary(part, ts.n_traders());
            res.partitions[task] = std::move(part);
        },
        [&](std::size_t task) {
            return "sweep grouping stage failed at (window " + std::to_string(task / n_dt) +
                   ", delta_t " + std::to_string(res.grid.values[task % n_dt]) + "s)";
        });

    // lead-lag stage: one cell per (window, ordered pair)
    detail::run_tasks(
        n_w * n_dt * n_dt, opts.threads,
        [&](std::size_t task) {
            const std::size_t w = task / (n_dt * n_dt);
            const std::size_t rest = task % (n_dt * n_dt);
            const std::size_t i1 = rest / n_dt;
            const std::size_t i2 = rest % n_dt;
            SweepCell& cell = res.cells[task];
            cell.window = res.windows[w].index;
            cell.dt1_s = res.grid.values[i1];
            cell.dt2_s = res.grid.values[i2];
            const auto& g1 = res.partitions[w * n_dt + i1];
            const auto& g2 = res.partitions[w * n_dt + i2];
            if (g1.groups.empty() || g2.groups.empty()) return;
            auto obs = leadlag_observations(ts, g1, g2, res.windows[w].days(), cell.dt1_s,
                                            cell.dt2_s, opts.rho0);
            auto net = build_llsvn(obs, ll_opts);
            auto tax = classify_links(net);
            cell.n_links = static_cast<std::int64_t>(tax.n_links);
            cell.n_self = static_cast<std::int64_t>(tax.n_self);
            cell.n_cross = static_cast<std::int64_t>(tax.n_cross);
            cell.n_groups_only_self = static_cast<std::int64_t>(tax.n_groups_only_self);
            cell.n_dual = static_cast<std::int64_t>(tax.n_dual);
            cell.m_tests = static_cast<std::int64_t>(net.m_tests);
            cell.threshold = net.threshold;
            auto rho = activity_rate_correlation(obs, net, rho_opts);
            cell.rho_n = rho.rho;
            cell.rho_pairs_used = rho.n_pairs_used;
        },
        [&](std::size_t task) {
            const std::size_t rest = task % (n_dt * n_dt);
            return "sweep lead-lag stage failed at (window " +
                   std::to_string(task / (n_dt * n_dt)) + ", " +
                   std::to_string(res.grid.values[rest / n_dt]) + "s, " +
                   std::to_string(res.grid.values[rest % n_dt]) + "s)";
        });

    return res;
}

namespace detail {

inline std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

inline std::optional<double> parse_opt_field(std::string_view s, std::size_t lineno) {
    if (trim(s).empty()) return std::nullopt;
    double v = 0.0;
    if (!parse_real(s, v)) throw ParseError(lineno, "bad numeric field '" + std::string(s) + "'");
    return v;
}

}  // namespace detail

// Persists a sweep as one CSV shard per window plus a summary shard and a
// JSON manifest. Partitions are intermediate state and are not persisted.
inline void save_sweep(const SweepResult& res, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::size_t n_dt = res.grid.n_values();

    std::vector<std::string> shard_names;
    for (std::size_t w = 0; w < res.n_windows(); ++w) {
        std::string name = "cells_w" + std::to_string(w) + ".csv";
        shard_names.push_back(name);
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("save_sweep: cannot write " + (dir / name).string());
        out << "window,dt1,dt2,n_links,n_self,n_cross,n_groups_only_self,n_dual,m_tests,threshold,"
               "rho_n,rho_pairs_used\n";
        for (std::size_t i1 = 0; i1 < n_dt; ++i1) {
            for (std::size_t i2 = 0; i2 < n_dt; ++i2) {
                const SweepCell& c = res.cells[(w * n_dt + i1) * n_dt + i2];
                out << c.window << ',' << c.dt1_s << ',' << c.dt2_s << ',' << c.n_links << ','
                    << c.n_self << ',' << c.n_cross << ',' << c.n_groups_only_self << ','
                    << c.n_dual << ',' << c.m_tests << ',' << detail::opt_field(c.threshold) << ','
                    << detail::opt_field(c.rho_n) << ',' << c.rho_pairs_used << '\n';
            }
        }
    }

    {
        std::ofstream out(dir / "svn_summary.csv", std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("save_sweep: cannot write " + (dir / "svn_summary.csv").string());
        out << "window,dt,n_groups,fraction_grouped,mean_size,median_size\n";
        for (std::size_t w = 0; w < res.n_windows(); ++w) {
            for (std::size_t d = 0; d < n_dt; ++d) {
                const SvnSummary& s = res.svn_summaries[w * n_dt + d];
                out << res.windows[w].index << ',' << res.grid.values[d] << ',' << s.n_groups << ','
                    << format_double(s.fraction_grouped) << ',' << detail::opt_field(s.mean_size)
                    << ',' << detail::opt_field(s.median_size) << '\n';
            }
        }
    }

    nlohmann::json manifest;
    manifest["format"] = "llsvn-sweep";
    manifest["version"] = kVersion;
    manifest["config_hash"] = res.config_hash;
    manifest["seed"] = res.seed;
    manifest["grid"] = {{"min_s", res.grid.min_s}, {"max_s", res.grid.max_s},
                        {"step_s", res.grid.step_s}};
    manifest["windows"] = nlohmann::json::array();
    for (const auto& w : res.windows) {
        manifest["windows"].push_back(
            {{"index", w.index}, {"start_day", w.start_ord}, {"t_in_days", w.t_in_days}});
    }
    manifest["shards"] = shard_names;
    manifest["summary"] = "svn_summary.csv";
    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("save_sweep: cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
}

inline SweepResult load_sweep(const std::filesystem::path& dir) {
    std::ifstream min(dir / "manifest.json", std::ios::binary);
    if (!min) throw DataError("load_sweep: missing " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    try {
        min >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_sweep: bad manifest: " + std::string(e.what()));
    }
    if (manifest.value("format", "") != "llsvn-sweep") {
        throw DataError("load_sweep: not a sweep directory");
    }

    SweepResult res;
    res.grid = timescale_grid(manifest["grid"]["min_s"].get<int>(),
                              manifest["grid"]["max_s"].get<int>(),
                              manifest["grid"]["step_s"].get<int>());
    res.seed = manifest["seed"].get<std::uint64_t>();
    res.config_hash = manifest.value("config_hash", "");
    for (const auto& jw : manifest["windows"]) {
        res.windows.push_back({jw["index"].get<std::int32_t>(), jw["start_day"].get<std::int32_t>(),
                               jw["t_in_days"].get<std::int32_t>()});
    }

    const std::size_t n_dt = res.grid.n_values();
    const std::size_t n_w = res.windows.size();
    res.cells.assign(n_w * n_dt * n_dt, {});
    res.svn_summaries.assign(n_w * n_dt, {});
    std::vector<std::uint8_t> seen(res.cells.size(), 0);

    const auto shards = manifest["shards"].get<std::vector<std::string>>();
    if (shards.size() != n_w) throw DataError("load_sweep: shard count does not match windows");
    for (const auto& name : shards) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw DataError("load_sweep: missing shard " + (dir / name).string());
        std::string line;
        std::size_t lineno = 0;
        if (!std::getline(in, line)) throw DataError("load_sweep: empty shard " + name);
        ++lineno;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            auto f = split(line, ',');
            if (f.size() != 12) throw ParseError(lineno, "expected 12 fields in " + name);
            SweepCell c;
            std::int64_t window = 0, dt1 = 0, dt2 = 0;
            if (!detail::parse_int64(f[0], window) || !detail::parse_int64(f[1], dt1) ||
                !detail::parse_int64(f[2], dt2) || !detail::parse_int64(f[3], c.n_links) ||
                !detail::parse_int64(f[4], c.n_self) || !detail::parse_int64(f[5], c.n_cross) ||
                !detail::parse_int64(f[6], c.n_groups_only_self) ||
                !detail::parse_int64(f[7], c.n_dual) || !detail::parse_int64(f[8], c.m_tests) ||
                !detail::parse_int64(f[11], c.rho_pairs_used)) {
                throw ParseError(lineno, "bad integer field in " + name);
            }
            c.window = static_cast<std::int32_t>(window);
            c.dt1_s = static_cast<int>(dt1);
            c.dt2_s = static_cast<int>(dt2);
            c.threshold = detail::parse_opt_field(f[9], lineno);
            c.rho_n = detail::parse_opt_field(f[10], lineno);
            const int i1 = res.grid.index_of(c.dt1_s);
            const int i2 = res.grid.index_of(c.dt2_s);
            if (c.window < 0 || static_cast<std::size_t>(c.window) >= n_w || i1 < 0 || i2 < 0) {
                throw ParseError(lineno, "cell outside the declared grid in " + name);
            }
            const std::size_t slot = (static_cast<std::size_t>(c.window) * n_dt +
                                      static_cast<std::size_t>(i1)) * n_dt +
                                     static_cast<std::size_t>(i2);
            if (seen[slot]) throw DataError("load_sweep: duplicate cell in " + name);
            seen[slot] = 1;
            res.cells[slot] = c;
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            const std::size_t w = i / (n_dt * n_dt);
            const std::size_t rest = i % (n_dt * n_dt);
            throw DataError("load_sweep: missing cell (window " + std::to_string(w) + ", " +
                            std::to_string(res.grid.values[rest / n_dt]) + "s, " +
                            std::to_string(res.grid.values[rest % n_dt]) + "s)");
        }
    }

    std::ifstream in(dir / "svn_summary.csv", std::ios::binary);
    if (!in) throw DataError("load_sweep: missing " + (dir / "svn_summary.csv").string());
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw DataError("load_sweep: empty svn_summary.csv");
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 6) throw ParseError(lineno, "expected 6 fields in svn_summary.csv");
        std::int64_t window = 0, dt = 0, n_groups = 0;
        double frac = 0.0;
        if (!detail::parse_int64(f[0], window) || !detail::parse_int64(f[1], dt) ||
            !detail::parse_int64(f[2], n_groups) || !detail::parse_real(f[3], frac)) {
            throw ParseError(lineno, "bad field in svn_summary.csv");
        }
        const int d = res.grid.index_of(static_cast<int>(dt));
        if (window < 0 || static_cast<std::size_t>(window) >= n_w || d < 0) {
            throw ParseError(lineno, "summary outside the declared grid");
        }
        SvnSummary s;
        s.n_groups = static_cast<std::size_t>(n_groups);
        s.fraction_grouped = frac;
        s.mean_size = detail::parse_opt_field(f[4], lineno);
        s.median_size = detail::parse_opt_field(f[5], lineno);
        res.svn_summaries[static_cast<std::size_t>(window) * n_dt + static_cast<std::size_t>(d)] = s;
    }
    return res;
}

// One row per grid timescale: grouping summary and same-timescale link
// taxonomy, averaged over calibration windows. Group sizes average only over
// windows that produced groups; NA when none did.
inline void write_sweep_report(const SweepResult& res, std::ostream& out) {
    if (res.n_windows() == 0) throw DataError("sweep report: no windows");
    out << "dt,n_windows,mean_groups,mean_fraction_grouped,mean_group_size,median_group_size,"
           "mean_links,mean_self,mean_cross,mean_dual\n";
    const double nw = static_cast<double>(res.n_windows());
    for (int dt : res.grid.values) {
        double groups = 0.0, frac = 0.0, links = 0.0, self_links = 0.0, cross = 0.0, dual = 0.0;
        double size_sum = 0.0, median_sum = 0.0;
        std::size_t sized = 0;
        for (std::size_t w = 0; w < res.n_windows(); ++w) {
            const SvnSummary& s = res.summary(w, dt);
            groups += static_cast<double>(s.n_groups);
            frac += s.fraction_grouped;
            if (s.mean_size) {
                size_sum += *s.mean_size;
                median_sum += s.median_size.value_or(0.0);
                ++sized;
            }
            const SweepCell& c = res.cell(w, dt, dt);
            links += static_cast<double>(c.n_links);
            self_links += static_cast<double>(c.n_self);
            cross += static_cast<double>(c.n_cross);
            dual += static_cast<double>(c.n_dual);
        }
        std::optional<double> mean_size, median_size;
        if (sized > 0) {
            mean_size = size_sum / static_cast<double>(sized);
            median_size = median_sum / static_cast<double>(sized);
        }
        out << dt << ',' << res.n_windows() << ',' << format_double(groups / nw) << ','
            << format_double(frac / nw) << ',' << detail::opt_field(mean_size) << ','
            << detail::opt_field(median_size) << ',' << format_double(links / nw) << ','
            << format_double(self_links / nw) << ',' << format_double(cross / nw) << ','
            << format_double(dual / nw) << '\n';
    }
}

}  // namespace llsvn
