// asymmetry.hpp - timescale-asymmetry statistics over a finished sweep:
// link-count and activity-correlation differences between the two
// orientations of every timescale pair, robust t statistics of those
// difference series across windows, and an FDR mask over the grid. The
// canonical orientation puts the coarser timescale in the past slot, so a
// positive statistic means the coarse-past -> fine-future direction carries
// more structure than its mirror image.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "llsvn/stats.hpp"
#include "llsvn/sweep.hpp"

namespace llsvn {

// Per-window series of link counts W over ordered timescale pairs.
struct LinkCountMatrices {
    TimescaleGrid grid;
    std::size_t n_windows = 0;
    std::vector<double> w;     // [window][dt1 index][dt2 index]
    std::vector<double> mean;  // over windows, [dt1 index][dt2 index]

    double at(std::size_t window, std::size_t i1, std::size_t i2) const {
        const std::size_t n = grid.n_values();
        return w[(window * n + i1) * n + i2];
    }
    double mean_at(std::size_t i1, std::size_t i2) const {
        return mean[i1 * grid.n_values() + i2];
    }
};

inline LinkCountMatrices link_count_matrix(const SweepResult& res) {
    LinkCountMatrices out;
    out.grid = res.grid;
    out.n_windows = res.n_windows();
    const std::size_t n = res.grid.n_values();
    out.w.assign(out.n_windows * n * n, 0.0);
    out.mean.assign(n * n, 0.0);
    for (std::size_t w = 0; w < out.n_windows; ++w) {
        for (std::size_t c = 0; c < n * n; ++c) {
            const double v = static_cast<double>(res.cells[w * n * n + c].n_links);
            out.w[w * n * n + c] = v;
            out.mean[c] += v;
        }
    }
    if (out.n_windows > 0) {
        for (double& v : out.mean) v /= static_cast<double>(out.n_windows);
    }
    return out;
}

// Per-window link counts for one ordered pair.
inline std::vector<double> link_count_series(const SweepResult& res, int dt1_s, int dt2_s) {
    std::vector<double> out;
    out.reserve(res.n_windows());
    for (std::size_t w = 0; w < res.n_windows(); ++w) {
        out.push_back(static_cast<double>(res.cell(w, dt1_s, dt2_s).n_links));
    }
    return out;
}

// Per-window difference W(dt1, dt2) - W(dt2, dt1).
inline std::vector<double> delta_w_series(const SweepResult& res, int dt1_s, int dt2_s) {
    std::vector<double> out;
    out.reserve(res.n_windows());
    for (std::size_t w = 0; w < res.n_windows(); ++w) {
        out.push_back(static_cast<double>(res.cell(w, dt1_s, dt2_s).n_links) -
                      static_cast<double>(res.cell(w, dt2_s, dt1_s).n_links));
    }
    return out;
}

// Per-window difference of activity-rate correlations; NaN where either
// orientation has no defined correlation, so downstream statistics drop the
// window.
inline std::vector<double> delta_rho_series(const SweepResult& res, int dt1_s, int dt2_s) {
    std::vector<double> out;
    out.reserve(res.n_windows());
    for (std::size_t w = 0; w < res.n_windows(); ++w) {
        const auto& a = res.cell(w, dt1_s, dt2_s).rho_n;
        const auto& b = res.cell(w, dt2_s, dt1_s).rho_n;
        out.push_back(a && b ? *a - *b : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

struct PairAsymmetry {
    int dt1_s = 0;  // coarse side, dt1 >= dt2
    int dt2_s = 0;
    double mean_dw = std::numeric_limits<double>::quiet_NaN();
    double mean_drho = std::numeric_limits<double>::quiet_NaN();
    Tstat t_dw;
    Tstat t_drho;
    double p_dw = std::numeric_limits<double>::quiet_NaN();
    double p_drho = std::numeric_limits<double>::quiet_NaN();
    bool fdr_dw = false;
    bool fdr_drho = false;
};

struct AsymmetryReport {
    TimescaleGrid grid;
    std::size_t n_windows = 0;
    double fdr_alpha = 0.05;
    std::string config_hash;
    std::vector<double> mean_w;    // per ordered pair, [dt1 index][dt2 index]
    std::vector<double> mean_rho;  // NaN where undefined in every window
    std::vector<PairAsymmetry> pairs;  // one per unordered pair, dt1 >= dt2,
                                       // ascending (dt1, dt2)
    std::optional<double> threshold_dw;
    std::optional<double> threshold_drho;
    std::int64_t m_dw = 0;
    std::int64_t m_drho = 0;

    const PairAsymmetry& pair(int dt1_s, int dt2_s) const {
        if (dt1_s < dt2_s) std::swap(dt1_s, dt2_s);
        const int i1 = grid.index_of(dt1_s);
        const int i2 = grid.index_of(dt2_s);
        if (i1 < 0 || i2 < 0) {
            throw DataError("asymmetry pair (" + std::to_string(dt1_s) + ", " +
                            std::to_string(dt2_s) + ") is outside the grid");
        }
        // pairs are stored for i1 >= i2, ascending: i1 * (i1 + 1) / 2 precede row i1
        return pairs[static_cast<std::size_t>(i1) * (static_cast<std::size_t>(i1) + 1) / 2 +
                     static_cast<std::size_t>(i2)];
    }
};

struct AsymmetryOptions {
    double fdr_alpha = 0.05;
    TstatOptions tstat;
};

inline AsymmetryReport asymmetry_report(const SweepResult& res, AsymmetryOptions opts = {}) {
    AsymmetryReport rep;
    rep.grid = res.grid;
    rep.n_windows = res.n_windows();
    rep.fdr_alpha = opts.fdr_alpha;
    rep.config_hash = res.config_hash;

    const std::size_t n = res.grid.n_values();
    rep.mean_w.assign(n * n, 0.0);
    rep.mean_rho.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            double sum_w = 0.0, sum_rho = 0.0;
            std::size_t n_rho = 0;
            for (std::size_t w = 0; w < rep.n_windows; ++w) {
                const SweepCell& c = res.cells[(w * n + i1) * n + i2];
                sum_w += static_cast<double>(c.n_links);
                if (c.rho_n) {
                    sum_rho += *c.rho_n;
                    ++n_rho;
                }
            }
            if (rep.n_windows > 0) rep.mean_w[i1 * n + i2] = sum_w / static_cast<double>(rep.n_windows);
            if (n_rho > 0) rep.mean_rho[i1 * n + i2] = sum_rho / static_cast<double>(n_rho);
        }
    }

    std::vector<double> p_dw, p_drho;
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = 0; i2 <= i1; ++i2) {
            PairAsymmetry pa;
            pa.dt1_s = res.grid.values[i1];
            pa.dt2_s = res.grid.values[i2];
            auto dw = delta_w_series(res, pa.dt1_s, pa.dt2_s);
            auto drho = delta_rho_series(res, pa.dt1_s, pa.dt2_s);
            double sum = 0.0;
            for (double v : dw) sum += v;
            pa.mean_dw = dw.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : sum / static_cast<double>(dw.size());
            double rsum = 0.0;
            std::size_t rn = 0;
            for (double v : drho) {
                if (std::isfinite(v)) {
                    rsum += v;
                    ++rn;
                }
            }
            pa.mean_drho = rn > 0 ? rsum / static_cast<double>(rn)
                                  : std::numeric_limits<double>::quiet_NaN();
            pa.t_dw = robust_tstat(dw, opts.tstat);
            pa.t_drho = robust_tstat(drho, opts.tstat);
            pa.p_dw = tstat_pvalue(pa.t_dw);
            pa.p_drho = tstat_pvalue(pa.t_drho);
            p_dw.push_back(pa.p_dw);
            p_drho.push_back(pa.p_drho);
            rep.pairs.push_back(std::move(pa));
        }
    }

    auto fdr_w = fdr_mask_grid(p_dw, opts.fdr_alpha);
    auto fdr_r = fdr_mask_grid(p_drho, opts.fdr_alpha);
    rep.threshold_dw = fdr_w.threshold;
    rep.threshold_drho = fdr_r.threshold;
    rep.m_dw = fdr_w.m;
    rep.m_drho = fdr_r.m;
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
        rep.pairs[i].fdr_dw = fdr_w.pass[i] != 0;
        rep.pairs[i].fdr_drho = fdr_r.pass[i] != 0;
    }
    return rep;
}

inline const char* kMugshotMetrics[] = {"delta_w", "delta_rho"};

namespace detail {

inline void check_mugshot_metric(const std::string& metric) {
    if (metric != "delta_w" && metric != "delta_rho") {
        throw ConfigError("unknown mugshot metric '" + metric + "'");
    }
}

inline std::string nan_field(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

}  // namespace detail

// Long-format matrix behind the asymmetry heat maps: one row per unordered
// pair, coarse timescale first. Empty fields mark statistics that could not
// be computed.
inline void export_mugshot(const AsymmetryReport& rep, const std::string& metric,
                           std::ostream& out) {
    detail::check_mugshot_metric(metric);
    out << "dt1,dt2,mean,tstat,fdr_pass\n";
    for (const auto& pa : rep.pairs) {
        const bool dw = metric == "delta_w";
        const double mean = dw ? pa.mean_dw : pa.mean_drho;
        const Tstat& t = dw ? pa.t_dw : pa.t_drho;
        const bool pass = dw ? pa.fdr_dw : pa.fdr_drho;
        out << pa.dt1_s << ',' << pa.dt2_s << ',' << detail::nan_field(mean) << ','
            << (t.ok() ? format_double(t.t) : std::string()) << ',' << (pass ? 1 : 0) << '\n';
    }
}

struct MugshotRow {
    int dt1_s = 0;
    int dt2_s = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double tstat = std::numeric_limits<double>::quiet_NaN();
    bool fdr_pass = false;
};

struct MugshotTable {
    std::vector<MugshotRow> rows;
};

inline MugshotTable import_mugshot(std::istream& in) {
    MugshotTable table;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw DataError("import_mugshot: empty input");
    ++lineno;
    if (trim(line) != "dt1,dt2,mean,tstat,fdr_pass") {
        throw ParseError(lineno, "unexpected mugshot header");
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 5) throw ParseError(lineno, "expected 5 fields");
        MugshotRow row;
        std::int64_t dt1 = 0, dt2 = 0, pass = 0;
        if (!detail::parse_int64(f[0], dt1) || !detail::parse_int64(f[1], dt2) ||
            !detail::parse_int64(f[4], pass) || (pass != 0 && pass != 1)) {
            throw ParseError(lineno, "bad field");
        }
        row.dt1_s = static_cast<int>(dt1);
        row.dt2_s = static_cast<int>(dt2);
        if (auto v = detail::parse_opt_field(f[2], lineno)) row.mean = *v;
        if (auto v = detail::parse_opt_field(f[3], lineno)) row.tstat = *v;
        row.fdr_pass = pass == 1;
        table.rows.push_back(row);
    }
    return table;
}

// File variant: writes the CSV plus a small JSON sidecar with the family-level
// numbers the CSV rows cannot carry.
inline void export_mugshot(const AsymmetryReport& rep, const std::string& metric,
                           const std::filesystem::path& dir) {
    detail::check_mugshot_metric(metric);
    std::filesystem::create_directories(dir);
    const auto csv_path = dir / ("mugshot_" + metric + ".csv");
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw DataError("export_mugshot: cannot write " + csv_path.string());
    export_mugshot(rep, metric, csv);

    nlohmann::json meta;
    meta["metric"] = metric;
    meta["fdr_alpha"] = rep.fdr_alpha;
    meta["n_windows"] = rep.n_windows;
    meta["config_hash"] = rep.config_hash;
    const bool dw = metric == "delta_w";
    meta["m_tests"] = dw ? rep.m_dw : rep.m_drho;
    const auto& thr = dw ? rep.threshold_dw : rep.threshold_drho;
    if (thr) meta["threshold"] = *thr;
    const auto json_path = dir / ("mugshot_" + metric + ".json");
    std::ofstream js(json_path, std::ios::binary | std::ios::trunc);
    if (!js) throw DataError("export_mugshot: cannot write " + json_path.string());
    js << meta.dump(2) << '\n';
}

}  // namespace llsvn
