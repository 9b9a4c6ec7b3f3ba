// stats.hpp - autocorrelation-robust t statistics, their p-values, FDR masks
// over a grid of tests, and activity-rate correlations along validated
// lead-lag links.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "llsvn/leadlag.hpp"
#include "llsvn/validate.hpp"

namespace llsvn {

enum class TstatStatus : std::uint8_t {
    ok,
    insufficient_data,
    zero_variance,
};

struct Tstat {
    TstatStatus status = TstatStatus::insufficient_data;
    double t = std::numeric_limits<double>::quiet_NaN();
    double mean = std::numeric_limits<double>::quiet_NaN();
    double sd = std::numeric_limits<double>::quiet_NaN();
    double n_eff = 0.0;
    double r1 = std::numeric_limits<double>::quiet_NaN();
    std::int64_t n = 0;  // finite observations used

    bool ok() const { return status == TstatStatus::ok; }
};

struct TstatOptions {
    int n_min = 10;
    // When set, the denominator uses a Bartlett-kernel long-run variance with
    // the Newey-West automatic lag instead of the AR(1) sample-size deflation.
    bool hac = false;
};

// One-sample t statistic of a difference series, corrected for serial
// correlation. Non-finite entries are dropped before anything else. The
// default correction shrinks the sample size by the AR(1) factor
// (1 - r1) / (1 + r1), clipped to [1, n]; overlapping rolling windows make
// consecutive differences positively correlated and a plain t would
// overstate the evidence.
inline Tstat robust_tstat(std::span<const double> series, TstatOptions opts = {}) {
    if (opts.n_min < 2) throw ConfigError("robust_tstat: n_min must be at least 2");
    std::vector<double> d;
    d.reserve(series.size());
    for (double v : series) {
        if (std::isfinite(v)) d.push_back(v);
    }
    Tstat r;
    r.n = static_cast<std::int64_t>(d.size());
    if (r.n < opts.n_min) {
        r.status = TstatStatus::insufficient_data;
        return r;
    }
    const double n = static_cast<double>(r.n);
    double sum = 0.0;
    for (double v : d) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    r.mean = mean;
    r.sd = std::sqrt(ss / (n - 1.0));
    if (ss <= 0.0) {
        r.status = TstatStatus::zero_variance;
        return r;
    }

    double cross = 0.0;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) cross += (d[i] - mean) * (d[i + 1] - mean);
    r.r1 = cross / ss;

    if (!opts.hac) {
        double neff = n * (1.0 - r.r1) / (1.0 + r.r1);
        if (!(neff >= 1.0)) neff = 1.0;
        if (neff > n) neff = n;
        r.n_eff = neff;
        r.t = r.mean / (r.sd / std::sqrt(neff));
        r.status = TstatStatus::ok;
        return r;
    }

    // Bartlett-weighted long-run variance, lag window from the usual
    // floor(4 (n/100)^{2/9}) rule.
    const double gamma0 = ss / n;
    int lag = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
    if (lag > r.n - 1) lag = static_cast<int>(r.n) - 1;
    double lrv = gamma0;
    for (int l = 1; l <= lag; ++l) {
        double g = 0.0;
        for (std::size_t i = 0; i + static_cast<std::size_t>(l) < d.size(); ++i) {
            g += (d[i] - mean) * (d[i + static_cast<std::size_t>(l)] - mean);
        }
        g /= n;
        lrv += 2.0 * (1.0 - static_cast<double>(l) / (lag + 1.0)) * g;
    }
    if (lrv <= 0.0) {
        r.status = TstatStatus::zero_variance;
        return r;
    }
    r.n_eff = n * gamma0 / lrv;
    if (r.n_eff < 1.0) r.n_eff = 1.0;
    if (r.n_eff > n) r.n_eff = n;
    r.t = r.mean / std::sqrt(lrv / n);
    r.status = TstatStatus::ok;
    return r;
}

namespace detail {

// Continued fraction for the regularized incomplete beta, modified Lentz.
inline double betacf(double a, double b, double x) {
    const int kMaxIter = 500;
    const double kEps = 3e-16;
    const double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("reg_inc_beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lfront = a * std::log(x) + b * std::log1p(-x) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(lfront);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
    return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

// Two-sided tail probability of Student's t with nu degrees of freedom.
inline double student_t_pvalue(double t, double nu) {
    if (!(nu > 0.0)) throw ConfigError("student_t_pvalue: degrees of freedom must be positive");
    if (!std::isfinite(t)) return std::isnan(t) ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    const double x = nu / (nu + t * t);
    double p = reg_inc_beta(nu / 2.0, 0.5, x);
    if (p > 1.0) p = 1.0;
    if (p < 0.0) p = 0.0;
    return p;
}

// Two-sided tail probability of the standard normal.
inline double normal_pvalue(double t) {
    if (!std::isfinite(t)) return std::isnan(t) ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    return std::erfc(std::fabs(t) / std::sqrt(2.0));
}

// Two-sided p-value of a robust t statistic. Large effective samples use the
// normal tail; small ones Student's t with n_eff - 1 degrees of freedom.
// Degenerate statistics (too few points, zero variance) give NaN, which the
// grid-level FDR treats as an unperformed test.
inline double tstat_pvalue(const Tstat& t) {
    if (!t.ok()) return std::numeric_limits<double>::quiet_NaN();
    if (t.n_eff >= 30.0) return normal_pvalue(t.t);
    double nu = t.n_eff - 1.0;
    if (nu < 1.0) nu = 1.0;
    return student_t_pvalue(t.t, nu);
}

struct GridFdr {
    std::optional<double> threshold;
    std::vector<std::uint8_t> pass;  // aligned with the input; NaN cells never pass
    std::int64_t m = 0;              // valid cells in the hypothesis family
    std::int64_t n_pass = 0;
};

// Benjamini-Hochberg over a grid of p-values where NaN marks cells without a
// valid test; those are excluded from the family size.
inline GridFdr fdr_mask_grid(std::span<const double> pvalues, double alpha) {
    GridFdr out;
    out.pass.assign(pvalues.size(), 0);
    std::vector<double> valid;
    valid.reserve(pvalues.size());
    for (double p : pvalues) {
        if (!std::isnan(p)) valid.push_back(p);
    }
    out.m = static_cast<std::int64_t>(valid.size());
    if (valid.empty()) {
        bh_threshold({}, alpha, 0);  // surfaces bad alpha
        return out;
    }
    auto bh = bh_threshold(valid, alpha, out.m);
    out.threshold = bh.threshold;
    if (bh.threshold) {
        for (std::size_t i = 0; i < pvalues.size(); ++i) {
            if (!std::isnan(pvalues[i]) && pvalues[i] <= *bh.threshold) {
                out.pass[i] = 1;
                ++out.n_pass;
            }
        }
    }
    return out;
}

// Pearson correlation; empty when fewer than two points or either side has
// zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("pearson: series lengths differ");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    double r = sxy / std::sqrt(sxx * syy);
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

struct RhoOptions {
    // false: average per-pair correlations with equal weight.
    // true: pool every linked pair's points into a single correlation.
    bool pool_observations = false;
};

struct RhoResult {
    std::optional<double> rho;
    std::int64_t n_pairs_linked = 0;  // directed group pairs with a validated link
    std::int64_t n_pairs_used = 0;    // those that survived the variance screen
};

// Correlation between the leading groups' activity rates over the past
// interval and the lagging groups' rates over the future interval, restricted
// to group pairs connected by a validated lead-lag link. Rates are trade
// counts per second of interval.
inline RhoResult activity_rate_correlation(const LeadLagObservations& obs, const LeadLagNetwork& net,
                                           RhoOptions opts = {}) {
    RhoResult out;
    std::set<std::pair<int, int>> pairs;
    for (const auto& l : net.links) pairs.insert({l.src_group, l.dst_group});
    out.n_pairs_linked = static_cast<std::int64_t>(pairs.size());
    if (pairs.empty() || obs.n_points < 3) return out;

    const double inv1 = 1.0 / static_cast<double>(obs.dt1_s);
    const double inv2 = 1.0 / static_cast<double>(obs.dt2_s);
    std::vector<double> x(static_cast<std::size_t>(obs.n_points));
    std::vector<double> y(static_cast<std::size_t>(obs.n_points));
    std::vector<double> pooled_x, pooled_y;
    double sum = 0.0;
    for (const auto& [src, dst] : pairs) {
        for (std::int64_t k = 0; k < obs.n_points; ++k) {
            const auto i = static_cast<std::size_t>(k);
            x[i] = static_cast<double>(obs.past_trades[obs.cell(static_cast<std::size_t>(src), k)]) * inv1;
            y[i] = static_cast<double>(obs.future_trades[obs.cell(static_cast<std::size_t>(dst), k)]) * inv2;
        }
        if (opts.pool_observations) {
            auto r = pearson(x, y);  // variance screen only; pooled value computed below
            if (!r) continue;
            pooled_x.insert(pooled_x.end(), x.begin(), x.end());
            pooled_y.insert(pooled_y.end(), y.begin(), y.end());
            ++out.n_pairs_used;
        } else {
            auto r = pearson(x, y);
            if (!r) continue;
            sum += *r;
            ++out.n_pairs_used;
        }
    }
    if (out.n_pairs_used == 0) return out;
    if (opts.pool_observations) {
        out.rho = pearson(pooled_x, pooled_y);
        if (!out.rho) out.n_pairs_used = 0;
    } else {
        out.rho = sum / static_cast<double>(out.n_pairs_used);
    }
    return out;
}

}  // namespace llsvn
