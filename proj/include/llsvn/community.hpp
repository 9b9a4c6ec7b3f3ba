// community.hpp - map-equation community detection on SVNs and group-level
// state aggregation
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "llsvn/coarsen.hpp"
#include "llsvn/common.hpp"
#include "llsvn/validate.hpp"

namespace llsvn {

// Undirected weighted graph with nodes renumbered 0..n-1; node_ids maps back
// to the trader indices of the SVN the graph came from.
struct WeightedGraph {
    std::vector<int> node_ids;
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<double> strength;
    double total_weight = 0.0;  // sum of edge weights W

    std::size_t n_nodes() const { return node_ids.size(); }
};

// Collapses SVN multilinks to one weighted edge per trader pair; the weight is
// the number of validated state pairs.
inline WeightedGraph graph_from_svn(const Svn& svn) {
    WeightedGraph g;
    g.node_ids = svn.nodes;  // already sorted unique
    std::map<int, int> index;
    for (std::size_t k = 0; k < g.node_ids.size(); ++k) index[g.node_ids[k]] = static_cast<int>(k);

    std::map<std::pair<int, int>, double> weights;
    for (const auto& l : svn.links) weights[{index.at(l.i), index.at(l.j)}] += 1.0;

    g.adj.resize(g.n_nodes());
    g.strength.assign(g.n_nodes(), 0.0);
    for (const auto& [edge, w] : weights) {
        auto [a, b] = edge;
        g.adj[static_cast<std::size_t>(a)].push_back({b, w});
        g.adj[static_cast<std::size_t>(b)].push_back({a, w});
        g.strength[static_cast<std::size_t>(a)] += w;
        g.strength[static_cast<std::size_t>(b)] += w;
        g.total_weight += w;
    }
    return g;
}

namespace detail {

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Search state for the two-level map equation over a fixed graph. Modules are
// tracked by (sum of node visit rates, cut weight); the codelength is
//   L = plogp(q) - 2 sum_m plogp(q_m) + sum_m plogp(q_m + S_m) - sum_i plogp(p_i)
// with q_m = cut_m / 2W and p_i = strength_i / 2W.
struct MapState {
    const WeightedGraph* g = nullptr;
    double two_w = 0.0;
    std::vector<double> p;         // node visit rates
    std::vector<int> module_of;    // node -> module id
    std::vector<double> sum_p;     // per module
    std::vector<double> cut;       // per module, edge-weight units
    double node_term = 0.0;        // sum_i plogp(p_i), constant

    void init(const WeightedGraph& graph, const std::vector<int>& labels) {
        g = &graph;
        two_w = 2.0 * graph.total_weight;
        const std::size_t n = graph.n_nodes();
        p.resize(n);
        node_term = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = graph.strength[i] / two_w;
            node_term += plogp(p[i]);
        }
        module_of = labels;
        int n_mod = *std::max_element(labels.begin(), labels.end()) + 1;
        sum_p.assign(static_cast<std::size_t>(n_mod), 0.0);
        cut.assign(static_cast<std::size_t>(n_mod), 0.0);
        for (std::size_t i = 0; i < n; ++i) sum_p[static_cast<std::size_t>(labels[i])] += p[i];
        for (std::size_t i = 0; i < n; ++i) {
            for (auto [j, w] : graph.adj[i]) {
                if (labels[i] != labels[static_cast<std::size_t>(j)]) {
                    cut[static_cast<std::size_t>(labels[i])] += w;
                }
            }
        }
    }

    double codelength() const {
        double qtot = 0.0, mod_terms = 0.0;
        for (std::size_t m = 0; m < sum_p.size(); ++m) {
            if (sum_p[m] <= 0.0 && cut[m] <= 0.0) continue;
            double qm = cut[m] / two_w;
            qtot += qm;
            mod_terms += -2.0 * plogp(qm) + plogp(qm + sum_p[m]);
        }
        return plogp(qtot) + mod_terms - node_term;
    }
};

// Difference in codelength terms when module m goes from (c0, s0) to (c1, s1)
// and the total cut shifts accordingly; caller sums the per-module parts and
// the global plogp(q) part itself.
inline double module_terms(double c, double s, double two_w) {
    double qm = c / two_w;
    return -2.0 * plogp(qm) + plogp(qm + s);
}

}  // namespace detail

// Two-level map-equation codelength in bits of a node partition, given as a
// module label per node.
inline double map_codelength(const WeightedGraph& g, const std::vector<int>& labels) {
    if (g.n_nodes() == 0 || g.total_weight <= 0.0) {
        throw DataError("map_codelength: graph has no edges");
    }
    if (labels.size() != g.n_nodes()) {
        throw DataError("map_codelength: partition size does not match node count");
    }
    detail::MapState st;
    st.init(g, labels);
    return st.codelength();
}

struct CommunityOptions {
    int n_restarts = 10;
};

// Trader groups for one window and timescale. Groups hold trader indices into
// trader_ids, members sorted; groups ordered by their smallest member.
struct GroupPartition {
    std::vector<std::string> trader_ids;
    std::vector<std::vector<int>> groups;
    int window_id = 0;
    int delta_t_s = 0;
    double codelength = 0.0;

    std::size_t n_groups() const { return groups.size(); }

    std::size_t n_grouped() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.size();
        return n;
    }

    // trader index -> group index, -1 when ungrouped
    std::vector<int> assignment() const {
        std::vector<int> a(trader_ids.size(), -1);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (int i : groups[g]) a[static_cast<std::size_t>(i)] = static_cast<int>(g);
        }
        return a;
    }
};

namespace detail {

// One full greedy pass: repeated node sweeps (moves to neighbor modules or a
// fresh singleton), then module merges, until neither finds an improvement.
inline std::vector<int> refine_partition(const WeightedGraph& g, std::mt19937_64& rng) {
    const std::size_t n = g.n_nodes();
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    MapState st;
    st.init(g, labels);

    const double eps = 1e-12;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    auto q_of = [&]() {
        double q = 0.0;
        for (double c : st.cut) q += c;
        return q / st.two_w;
    };

    bool outer_changed = true;
    while (outer_changed) {
        outer_changed = false;

        // node-move sweeps
        bool moved = true;
        while (moved) {
            moved = false;
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t idx : order) {
                int cur = st.module_of[idx];
                double k_n = g.strength[idx];
                double p_n = st.p[idx];

                // edge weight from this node into each adjacent module
                std::map<int, double> to_mod;
                for (auto [j, w] : g.adj[idx]) to_mod[st.module_of[static_cast<std::size_t>(j)]] += w;
                double e_cur = to_mod.contains(cur) ? to_mod[cur] : 0.0;

                double c_cur = st.cut[static_cast<std::size_t>(cur)];
                double s_cur = st.sum_p[static_cast<std::size_t>(cur)];
                double c_cur_out = c_cur - k_n + 2.0 * e_cur;
                double s_cur_out = s_cur - p_n;
                double base_terms =
                    module_terms(c_cur, s_cur, st.two_w) - module_terms(c_cur_out, s_cur_out, st.two_w);
                double q0 = q_of();

                int best_mod = cur;
                double best_delta = 0.0;

                auto consider = [&](int m, double e_nm) {
                    double c_m = m < 0 ? 0.0 : st.cut[static_cast<std::size_t>(m)];
                    double s_m = m < 0 ? 0.0 : st.sum_p[static_cast<std::size_t>(m)];
                    double c_m_in = c_m + k_n - 2.0 * e_nm;
                    double s_m_in = s_m + p_n;
                    double dq = (c_cur_out - c_cur + c_m_in - c_m) / st.two_w;
                    double delta = plogp(q0 + dq) - plogp(q0) - base_terms +
                                   module_terms(c_m_in, s_m_in, st.two_w) -
                                   module_terms(c_m, s_m, st.two_w);
                    if (delta < best_delta - eps) {
                        best_delta = delta;
                        best_mod = m;
                    }
                };

                for (auto [m, e] : to_mod) {  // std::map: ascending, deterministic
                    if (m != cur) consider(m, e);
                }
                // detaching into a fresh singleton, unless already alone
                if (s_cur - p_n > 0.0) consider(-1, 0.0);

                if (best_mod != cur) {
                    int target = best_mod;
                    if (target < 0) {
                        target = static_cast<int>(st.cut.size());
                        st.cut.push_back(0.0);
                        st.sum_p.push_back(0.0);
                    }
                    double e_new = to_mod.contains(target) ? to_mod[target] : 0.0;
                    st.cut[static_cast<std::size_t>(cur)] = c_cur_out;
                    st.sum_p[static_cast<std::size_t>(cur)] = s_cur_out;
                    st.cut[static_cast<std::size_t>(target)] += k_n - 2.0 * e_new;
                    st.sum_p[static_cast<std::size_t>(target)] += p_n;
                    st.module_of[idx] = target;
                    moved = true;
                    outer_changed = true;
                }
            }
        }

        // module-merge passes over connected module pairs
        bool merged = true;
        while (merged) {
            merged = false;
            std::map<std::pair<int, int>, double> between;
            for (std::size_t i = 0; i < n; ++i) {
                for (auto [j, w] : g.adj[i]) {
                    int a = st.module_of[i], b = st.module_of[static_cast<std::size_t>(j)];
                    if (a < b) between[{a, b}] += w;
                }
            }
            double q0 = q_of();
            double best_delta = 0.0;
            std::pair<int, int> best{-1, -1};
            for (const auto& [mods, w_ab] : between) {
                auto [a, b] = mods;
                double c_a = st.cut[static_cast<std::size_t>(a)], s_a = st.sum_p[static_cast<std::size_t>(a)];
                double c_b = st.cut[static_cast<std::size_t>(b)], s_b = st.sum_p[static_cast<std::size_t>(b)];
                double c_ab = c_a + c_b - 2.0 * w_ab;
                double dq = (c_ab - c_a - c_b) / st.two_w;
                double delta = plogp(q0 + dq) - plogp(q0) + module_terms(c_ab, s_a + s_b, st.two_w) -
                               module_terms(c_a, s_a, st.two_w) - module_terms(c_b, s_b, st.two_w);
                if (delta < best_delta - eps) {
                    best_delta = delta;
                    best = mods;
                }
            }
            if (best.first >= 0) {
                auto [a, b] = best;
                double w_ab = between[{a, b}];
                st.cut[static_cast<std::size_t>(a)] += st.cut[static_cast<std::size_t>(b)] - 2.0 * w_ab;
                st.sum_p[static_cast<std::size_t>(a)] += st.sum_p[static_cast<std::size_t>(b)];
                st.cut[static_cast<std::size_t>(b)] = 0.0;
                st.sum_p[static_cast<std::size_t>(b)] = 0.0;
                for (auto& m : st.module_of) {
                    if (m == b) m = a;
                }
                merged = true;
                outer_changed = true;
            }
        }
    }
    return st.module_of;
}

// Relabels modules by first appearance in node order, so equal partitions
// compare equal as vectors.
inline std::vector<int> canonical_labels(const std::vector<int>& labels) {
    std::vector<int> out(labels.size());
    std::map<int, int> seen;
    int next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = seen.insert({labels[i], next});
        if (inserted) ++next;
        out[i] = it->second;
    }
    return out;
}

}  // namespace detail

// Greedy map-equation minimization over a weighted graph: best of n_restarts
// randomized runs, ties in codelength broken by the lexicographically smallest
// canonical labeling. Deterministic given the seed.
inline std::vector<int> detect_labels(const WeightedGraph& g, std::uint64_t seed,
                                      const CommunityOptions& opts = {}) {
    if (g.n_nodes() == 0 || g.total_weight <= 0.0) {
        throw DataError("detect_labels: graph has no edges");
    }
    std::vector<int> best_labels;
    double best_len = 0.0;
    for (int r = 0; r < std::max(1, opts.n_restarts); ++r) {
        std::mt19937_64 rng(fnv1a64_mix(seed, static_cast<std::uint64_t>(r) + 1));
        std::vector<int> labels = detail::canonical_labels(detail::refine_partition(g, rng));
        double len = map_codelength(g, labels);
        if (best_labels.empty() || len < best_len - 1e-12 ||
            (std::abs(len - best_len) <= 1e-12 && labels < best_labels)) {
            best_labels = std::move(labels);
            best_len = len;
        }
    }
    return best_labels;
}

inline GroupPartition detect_communities(const Svn& svn, std::uint64_t seed,
                                         const CommunityOptions& opts = {}) {
    GroupPartition part;
    part.trader_ids = svn.trader_ids;
    part.window_id = svn.window_id;
    part.delta_t_s = svn.delta_t_s;
    if (svn.links.empty()) return part;

    WeightedGraph g = graph_from_svn(svn);
    std::vector<int> best_labels = detect_labels(g, seed, opts);
    part.codelength = map_codelength(g, best_labels);
    int n_mod = *std::max_element(best_labels.begin(), best_labels.end()) + 1;
    part.groups.resize(static_cast<std::size_t>(n_mod));
    for (std::size_t k = 0; k < best_labels.size(); ++k) {
        part.groups[static_cast<std::size_t>(best_labels[k])].push_back(g.node_ids[k]);
    }
    for (auto& grp : part.groups) std::sort(grp.begin(), grp.end());
    std::sort(part.groups.begin(), part.groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return part;
}

struct SvnSummary {
    std::size_t n_groups = 0;
    double fraction_grouped = 0.0;
    std::optional<double> mean_size;
    std::optional<double> median_size;

    bool operator==(const SvnSummary&) const = default;
};

inline SvnSummary svn_summary(const GroupPartition& part, std::size_t universe) {
    if (universe == 0) throw DataError("svn_summary: universe must be positive");
    SvnSummary s;
    s.n_groups = part.n_groups();
    if (s.n_groups == 0) return s;
    std::vector<double> sizes;
    for (const auto& g : part.groups) sizes.push_back(static_cast<double>(g.size()));
    std::sort(sizes.begin(), sizes.end());
    double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
    s.fraction_grouped = total / static_cast<double>(universe);
    s.mean_size = total / static_cast<double>(sizes.size());
    std::size_t mid = sizes.size() / 2;
    s.median_size = sizes.size() % 2 ? sizes[mid] : 0.5 * (sizes[mid - 1] + sizes[mid]);
    return s;
}

// Per-group aggregate states: member volumes summed per slot, then the same
// dead-zone rule as for single traders.
struct GroupStateSeries {
    std::size_t n_groups = 0;
    std::int64_t n_slices = 0;
    std::vector<double> v;  // row-major [group][slot]
    std::vector<double> a;
    std::vector<std::int64_t> n_trades;
    std::vector<State> sigma;

    std::size_t cell(std::size_t group, std::int64_t slot) const {
        return group * static_cast<std::size_t>(n_slices) + static_cast<std::size_t>(slot);
    }

    std::span<const State> states_row(std::size_t group) const {
        return {sigma.data() + group * n_slices, static_cast<std::size_t>(n_slices)};
    }
};

inline GroupStateSeries group_state_series(const GroupPartition& part, const StateMatrix& sm,
                                           double rho0) {
    if (rho0 <= 0.0 || rho0 >= 1.0) throw ConfigError("rho0 must be in (0, 1)");
    GroupStateSeries gs;
    gs.n_groups = part.n_groups();
    gs.n_slices = sm.n_slices;
    const std::size_t n_cells = gs.n_groups * static_cast<std::size_t>(gs.n_slices);
    gs.v.assign(n_cells, 0.0);
    gs.a.assign(n_cells, 0.0);
    gs.n_trades.assign(n_cells, 0);
    gs.sigma.assign(n_cells, kStateNA);

    for (std::size_t g = 0; g < part.groups.size(); ++g) {
        for (int trader : part.groups[g]) {
            auto ti = static_cast<std::size_t>(trader);
            if (ti >= sm.n_traders()) throw DataError("group member missing from state matrix");
            for (std::int64_t s = 0; s < gs.n_slices; ++s) {
                std::size_t src = sm.cell(ti, s), dst = gs.cell(g, s);
                gs.v[dst] += sm.v[src];
                gs.a[dst] += sm.a[src];
                gs.n_trades[dst] += sm.n_trades[src];
            }
        }
        for (std::int64_t s = 0; s < gs.n_slices; ++s) {
            std::size_t c = gs.cell(g, s);
            if (gs.a[c] > 0.0) gs.sigma[c] = assign_state(gs.v[c] / gs.a[c], rho0);
        }
    }
    return gs;
}

// Adjusted Rand index between two labelings of the same elements; 1 for
// identical partitions, ~0 for independent ones.
inline double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw DataError("adjusted_rand_index: label vectors differ in length");
    if (a.empty()) return 1.0;
    std::map<std::pair<int, int>, std::int64_t> joint;
    std::map<int, std::int64_t> ca, cb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++ca[a[i]];
        ++cb[b[i]];
    }
    auto choose2 = [](std::int64_t n) { return 0.5 * static_cast<double>(n) * (n - 1); };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [k, n] : joint) sum_ij += choose2(n);
    for (const auto& [k, n] : ca) sum_a += choose2(n);
    for (const auto& [k, n] : cb) sum_b += choose2(n);
    double n_pairs = choose2(static_cast<std::int64_t>(a.size()));
    double expected = sum_a * sum_b / n_pairs;
    double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;
    return (sum_ij - expected) / (max_index - expected);
}

// CSV export: window_id,delta_t,group_id,trader_id
inline void export_partition(const GroupPartition& part, std::ostream& out) {
    out << "window_id,delta_t,group_id,trader_id\n";
    for (std::size_t g = 0; g < part.groups.size(); ++g) {
        for (int trader : part.groups[g]) {
            out << part.window_id << ',' << part.delta_t_s << ',' << g << ','
                << part.trader_ids[static_cast<std::size_t>(trader)] << '\n';
        }
    }
}

}  // namespace llsvn
