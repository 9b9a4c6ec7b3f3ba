// validate.hpp - exact co-occurrence over-expression tests and FDR control
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "llsvn/coarsen.hpp"
#include "llsvn/common.hpp"

namespace llsvn {

namespace detail {

// Packed slot mask used to count state co-occurrences quickly.
struct Bitset {
    std::vector<std::uint64_t> words;

    Bitset() = default;
    explicit Bitset(std::size_t n_bits) : words((n_bits + 63) / 64, 0) {}

    void set(std::size_t i) { words[i >> 6] |= std::uint64_t(1) << (i & 63); }

    std::int64_t popcount() const {
        std::int64_t n = 0;
        for (std::uint64_t w : words) n += std::popcount(w);
        return n;
    }
};

inline std::int64_t and_popcount(const Bitset& a, const Bitset& b) {
    std::int64_t n = 0;
    for (std::size_t k = 0; k < a.words.size(); ++k) n += std::popcount(a.words[k] & b.words[k]);
    return n;
}

inline std::int64_t and3_popcount(const Bitset& a, const Bitset& b, const Bitset& c) {
    std::int64_t n = 0;
    for (std::size_t k = 0; k < a.words.size(); ++k) {
        n += std::popcount(a.words[k] & b.words[k] & c.words[k]);
    }
    return n;
}

}  // namespace detail

// log k! for k = 0..n, shared across the many tests of one window
class LogFactTable {
public:
    explicit LogFactTable(std::int64_t n) : lf_(static_cast<std::size_t>(n) + 1, 0.0) {
        for (std::size_t k = 2; k < lf_.size(); ++k) {
            lf_[k] = lf_[k - 1] + std::log(static_cast<double>(k));
        }
    }

    double lchoose(std::int64_t n, std::int64_t k) const {
        return lf_[static_cast<std::size_t>(n)] - lf_[static_cast<std::size_t>(k)] -
               lf_[static_cast<std::size_t>(n - k)];
    }

    std::int64_t max_n() const { return static_cast<std::int64_t>(lf_.size()) - 1; }

private:
    std::vector<double> lf_;
};

struct CoCounts {
    std::int64_t t = 0;
    std::int64_t n_p = 0;
    std::int64_t n_q = 0;
    std::int64_t n_pq = 0;
};

struct CoTestResult {
    std::int64_t t = 0;
    std::int64_t n_p = 0;
    std::int64_t n_q = 0;
    std::int64_t n_pq = 0;
    double p_value = 1.0;
};

// Counts state matches over aligned slots. NA slots count toward t but match
// no state symbol.
inline CoCounts cooccurrence_counts(std::span<const State> a, std::span<const State> b, State p,
                                    State q) {
    if (a.size() != b.size()) {
        throw DataError("cooccurrence_counts: series lengths differ (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    }
    CoCounts c;
    c.t = static_cast<std::int64_t>(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        bool ma = a[k] == p;
        bool mb = b[k] == q;
        c.n_p += ma;
        c.n_q += mb;
        c.n_pq += ma && mb;
    }
    return c;
}

// Upper tail P(X >= n_pq) of the hypergeometric distribution with population t,
// n_p successes and n_q draws, summed in log space. This is the p-value of the
// over-expression null in which both margins are fixed and slots are exchangeable.
inline double hypergeom_pvalue(std::int64_t t, std::int64_t n_p, std::int64_t n_q,
                               std::int64_t n_pq, const LogFactTable* table = nullptr) {
    if (t < 0 || n_p < 0 || n_q < 0 || n_pq < 0 || n_p > t || n_q > t ||
        n_pq > std::min(n_p, n_q)) {
        throw DataError("hypergeom_pvalue: invalid counts (t=" + std::to_string(t) +
                        ", n_p=" + std::to_string(n_p) + ", n_q=" + std::to_string(n_q) +
                        ", n_pq=" + std::to_string(n_pq) + ")");
    }
    if (n_p > n_q) std::swap(n_p, n_q);  // the tail is margin-symmetric; canonicalize
    const std::int64_t lo_support = std::max<std::int64_t>(0, n_p + n_q - t);
    const std::int64_t hi = std::min(n_p, n_q);
    if (n_pq <= lo_support) return 1.0;

    std::optional<LogFactTable> local;
    if (table == nullptr || table->max_n() < t) {
        local.emplace(t);
        table = &*local;
    }

    auto lterm = [&](std::int64_t x) {
        return table->lchoose(n_p, x) + table->lchoose(t - n_p, n_q - x) - table->lchoose(t, n_q);
    };

    // Anchor the sum at the largest term so everything is added relative to it.
    const std::int64_t mode = (n_p + 1) * (n_q + 1) / (t + 2);
    const std::int64_t anchor = std::clamp(mode, n_pq, hi);
    const double lref = lterm(anchor);

    double sum = 0.0;
    for (std::int64_t x = n_pq; x <= hi; ++x) {
        double r = std::exp(lterm(x) - lref);
        sum += r;
        if (x > mode && r < sum * 1e-18) break;
    }
    double lp = lref + std::log(sum);
    if (lp >= 0.0) return 1.0;
    return std::max(std::exp(lp), std::numeric_limits<double>::denorm_min());
}

inline CoTestResult co_test(std::span<const State> a, std::span<const State> b, State p, State q,
                            const LogFactTable* table = nullptr) {
    CoCounts c = cooccurrence_counts(a, b, p, q);
    return {c.t, c.n_p, c.n_q, c.n_pq, hypergeom_pvalue(c.t, c.n_p, c.n_q, c.n_pq, table)};
}

struct BhResult {
    std::optional<double> threshold;     // realized critical p-value, empty if nothing rejected
    std::vector<std::uint8_t> reject;    // aligned with the input order
    std::size_t n_rejected = 0;
};

// Benjamini-Hochberg step-up over m hypotheses; the p-value list may be shorter
// than m when the remaining tests were never performed (they count as p = 1).
inline BhResult bh_threshold(std::span<const double> pvalues, double alpha, std::size_t m) {
    if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("fdr alpha must be in (0, 1)");
    if (m < pvalues.size()) {
        throw DataError("bh_threshold: m (" + std::to_string(m) + ") smaller than the p-value count (" +
                        std::to_string(pvalues.size()) + ")");
    }
    BhResult r;
    r.reject.assign(pvalues.size(), 0);
    if (pvalues.empty()) return r;

    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    double thr = -1.0;
    for (std::size_t k = sorted.size(); k >= 1; --k) {
        if (sorted[k - 1] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
            thr = sorted[k - 1];
            break;
        }
    }
    if (thr < 0.0) return r;
    r.threshold = thr;
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        if (pvalues[i] <= thr) {
            r.reject[i] = 1;
            ++r.n_rejected;
        }
    }
    return r;
}

struct SvnLink {
    int i = 0;  // trader indices into the state matrix, i < j
    int j = 0;
    State state_i = 0;
    State state_j = 0;
    double p_value = 1.0;

    friend bool operator==(const SvnLink&, const SvnLink&) = default;
};

// Statistically validated network for one window and timescale.
struct Svn {
    std::vector<std::string> trader_ids;  // full matrix universe
    std::vector<SvnLink> links;           // sorted by (i, j, state_i, state_j)
    std::vector<int> nodes;               // sorted trader indices with >= 1 link
    double fdr_alpha = 0.05;
    std::optional<double> threshold;
    std::size_t m_tests = 0;
    int window_id = 0;
    int delta_t_s = 0;
};

struct SvnOptions {
    double fdr_alpha = 0.05;
    std::int64_t min_active_slices = 10;
    bool condition_on_joint_activity = false;
    std::vector<std::pair<State, State>> state_pairs = {
        {kStateBuy, kStateBuy}, {kStateSell, kStateSell}, {kStateNeutral, kStateNeutral}};
};

// Tests every unordered pair of sufficiently active traders for each requested
// state pair and keeps the BH rejections. m = number of tests actually
// performed (pairs whose two margins are both positive).
inline Svn build_svn(const StateMatrix& sm, const SvnOptions& opts = {}) {
    if (sm.n_traders() < 2) {
        throw DataError("build_svn: need at least 2 traders, got " + std::to_string(sm.n_traders()));
    }
    if (opts.fdr_alpha <= 0.0 || opts.fdr_alpha >= 1.0) {
        throw ConfigError("fdr alpha must be in (0, 1)");
    }
    for (auto [p, q] : opts.state_pairs) {
        if (p != q || (p != kStateBuy && p != kStateSell && p != kStateNeutral)) {
            throw ConfigError("grouping SVN state pairs must be (+1,+1), (-1,-1) or (0,0)");
        }
    }

    const std::int64_t t_slots = sm.n_slices;
    const std::size_t n_bits = static_cast<std::size_t>(t_slots);

    std::vector<int> eligible;
    const std::int64_t min_active = std::max<std::int64_t>(1, opts.min_active_slices);
    for (std::size_t i = 0; i < sm.n_traders(); ++i) {
        if (sm.active_slices(i) >= min_active) eligible.push_back(static_cast<int>(i));
    }

    Svn svn;
    svn.trader_ids = sm.trader_ids;
    svn.fdr_alpha = opts.fdr_alpha;
    svn.delta_t_s = sm.grid.delta_t_s;
    if (eligible.size() < 2) return svn;

    // one bitset per requested symbol plus the activity mask
    std::vector<State> symbols;
    for (auto [p, q] : opts.state_pairs) symbols.push_back(p);
    const std::size_t n_sym = symbols.size();

    std::vector<detail::Bitset> masks(eligible.size() * (n_sym + 1), detail::Bitset(n_bits));
    std::vector<std::int64_t> sym_count(eligible.size() * n_sym, 0);
    for (std::size_t e = 0; e < eligible.size(); ++e) {
        auto row = sm.row(static_cast<std::size_t>(eligible[e]));
        for (std::size_t s = 0; s < n_bits; ++s) {
            State st = row[s];
            if (st == kStateNA) continue;
            masks[e * (n_sym + 1) + n_sym].set(s);
            for (std::size_t y = 0; y < n_sym; ++y) {
                if (st == symbols[y]) {
                    masks[e * (n_sym + 1) + y].set(s);
                    ++sym_count[e * n_sym + y];
                }
            }
        }
    }

    LogFactTable table(t_slots);
    struct Pending {
        int i, j;
        State sa, sb;
        double p;
    };
    std::vector<Pending> tests;

    for (std::size_t ea = 0; ea < eligible.size(); ++ea) {
        for (std::size_t eb = ea + 1; eb < eligible.size(); ++eb) {
            const detail::Bitset& act_a = masks[ea * (n_sym + 1) + n_sym];
            const detail::Bitset& act_b = masks[eb * (n_sym + 1) + n_sym];
            std::int64_t t_ij = t_slots;
            if (opts.condition_on_joint_activity) {
                t_ij = detail::and_popcount(act_a, act_b);
                if (t_ij == 0) continue;
            }
            for (std::size_t y = 0; y < n_sym; ++y) {
                const detail::Bitset& ma = masks[ea * (n_sym + 1) + y];
                const detail::Bitset& mb = masks[eb * (n_sym + 1) + y];
                std::int64_t np, nq, npq;
                if (opts.condition_on_joint_activity) {
                    np = detail::and_popcount(ma, act_b);
                    nq = detail::and_popcount(act_a, mb);
                    npq = detail::and_popcount(ma, mb);
                } else {
                    np = sym_count[ea * n_sym + y];
                    nq = sym_count[eb * n_sym + y];
                    npq = detail::and_popcount(ma, mb);
                }
                if (np == 0 || nq == 0) continue;
                double p = hypergeom_pvalue(t_ij, np, nq, npq, &table);
                tests.push_back({eligible[ea], eligible[eb], symbols[y], symbols[y], p});
            }
        }
    }

    svn.m_tests = tests.size();
    std::vector<double> ps;
    ps.reserve(tests.size());
    for (const auto& t : tests) ps.push_back(t.p);
    BhResult bh = bh_threshold(ps, opts.fdr_alpha, tests.size());
    svn.threshold = bh.threshold;

    for (std::size_t k = 0; k < tests.size(); ++k) {
        if (bh.reject[k]) {
            svn.links.push_back({tests[k].i, tests[k].j, tests[k].sa, tests[k].sb, tests[k].p});
        }
    }
    std::sort(svn.links.begin(), svn.links.end(), [](const SvnLink& a, const SvnLink& b) {
        return std::tie(a.i, a.j, a.state_i, a.state_j) < std::tie(b.i, b.j, b.state_i, b.state_j);
    });
    for (const auto& l : svn.links) {
        svn.nodes.push_back(l.i);
        svn.nodes.push_back(l.j);
    }
    std::sort(svn.nodes.begin(), svn.nodes.end());
    svn.nodes.erase(std::unique(svn.nodes.begin(), svn.nodes.end()), svn.nodes.end());
    return svn;
}

// CSV export: window_id,trader_i,trader_j,state_i,state_j,p_value
inline void export_svn(const Svn& svn, std::ostream& out) {
    out << "window_id,trader_i,trader_j,state_i,state_j,p_value\n";
    for (const auto& l : svn.links) {
        out << svn.window_id << ',' << svn.trader_ids[static_cast<std::size_t>(l.i)] << ','
            << svn.trader_ids[static_cast<std::size_t>(l.j)] << ',' << state_name(l.state_i) << ','
            << state_name(l.state_j) << ',' << format_double(l.p_value) << '\n';
    }
}

}  // namespace llsvn
