#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "llsvn/community.hpp"
#include "oracles.hpp"

using namespace llsvn;

namespace {

WeightedGraph make_graph(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    WeightedGraph g;
    g.node_ids.resize(static_cast<std::size_t>(n));
    std::iota(g.node_ids.begin(), g.node_ids.end(), 0);
    g.adj.resize(static_cast<std::size_t>(n));
    g.strength.assign(static_cast<std::size_t>(n), 0.0);
    for (auto [a, b, w] : edges) {
        g.adj[static_cast<std::size_t>(a)].push_back({b, w});
        g.adj[static_cast<std::size_t>(b)].push_back({a, w});
        g.strength[static_cast<std::size_t>(a)] += w;
        g.strength[static_cast<std::size_t>(b)] += w;
        g.total_weight += w;
    }
    return g;
}

Svn svn_from_edges(int n_traders, const std::vector<std::tuple<int, int, int>>& weighted_pairs) {
    Svn svn;
    for (int i = 0; i < n_traders; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "T%03d", i);
        svn.trader_ids.push_back(buf);
    }
    const State syms[3] = {kStateBuy, kStateSell, kStateNeutral};
    for (auto [a, b, mult] : weighted_pairs) {
        for (int k = 0; k < mult; ++k) {
            svn.links.push_back({a, b, syms[k], syms[k], 1e-6});
        }
    }
    for (const auto& l : svn.links) {
        svn.nodes.push_back(l.i);
        svn.nodes.push_back(l.j);
    }
    std::sort(svn.nodes.begin(), svn.nodes.end());
    svn.nodes.erase(std::unique(svn.nodes.begin(), svn.nodes.end()), svn.nodes.end());
    return svn;
}

double exhaustive_min_codelength(const WeightedGraph& g) {
    double best = std::numeric_limits<double>::infinity();
    oracles::for_each_partition(static_cast<int>(g.n_nodes()), [&](const std::vector<int>& labels) {
        best = std::min(best, map_codelength(g, labels));
    });
    return best;
}

}  // namespace

TEST_CASE("codelength of hand-evaluated partitions") {
    auto triangle = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    CHECK(map_codelength(triangle, {0, 0, 0}) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

    auto two_tri = make_graph(
        6, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}});
    CHECK(map_codelength(two_tri, {0, 0, 0, 1, 1, 1}) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(map_codelength(two_tri, {0, 0, 0, 0, 0, 0}) ==
          doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(map_codelength(two_tri, {0, 0, 0, 1, 1, 1}) <
          map_codelength(two_tri, {0, 0, 0, 0, 0, 0}));

    CHECK_THROWS_AS(map_codelength(WeightedGraph{}, {}), DataError);
    CHECK_THROWS_AS(map_codelength(triangle, {0, 0}), DataError);
}

TEST_CASE("splitting a triangle can only lengthen the code") {
    auto triangle = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    double whole = map_codelength(triangle, {0, 0, 0});
    oracles::for_each_partition(3, [&](const std::vector<int>& labels) {
        CHECK(map_codelength(triangle, labels) >= whole - 1e-12);
    });
}

TEST_CASE("two disconnected triangles come out as two groups") {
    auto svn = svn_from_edges(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                                  {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
    auto part = detect_communities(svn, 42);
    REQUIRE(part.n_groups() == 2);
    CHECK(part.groups[0] == std::vector<int>{0, 1, 2});
    CHECK(part.groups[1] == std::vector<int>{3, 4, 5});
    CHECK(part.codelength == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("a single triangle is one group") {
    auto svn = svn_from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    auto part = detect_communities(svn, 1);
    REQUIRE(part.n_groups() == 1);
    CHECK(part.groups[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("same input and seed give the same partition") {
    std::mt19937_64 rng(8);
    std::vector<std::tuple<int, int, int>> edges;
    for (int a = 0; a < 20; ++a) {
        for (int b = a + 1; b < 20; ++b) {
            if (std::uniform_real_distribution<>(0, 1)(rng) < 0.2) {
                edges.push_back({a, b, std::uniform_int_distribution<int>(1, 3)(rng)});
            }
        }
    }
    auto svn = svn_from_edges(20, edges);
    auto p1 = detect_communities(svn, 777);
    auto p2 = detect_communities(svn, 777);
    CHECK(p1.groups == p2.groups);
    CHECK(p1.codelength == p2.codelength);
}

TEST_CASE("detected partitions match exhaustive search on small graphs") {
    std::mt19937_64 rng(301);
    int checked = 0;
    while (checked < 25) {
        int n = std::uniform_int_distribution<int>(4, 8)(rng);
        std::vector<std::tuple<int, int, double>> edges;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (std::uniform_real_distribution<>(0, 1)(rng) < 0.45) {
                    edges.push_back({a, b, double(std::uniform_int_distribution<int>(1, 3)(rng))});
                }
            }
        }
        if (edges.empty()) continue;
        auto g = make_graph(n, edges);
        auto labels = detect_labels(g, 1000 + static_cast<std::uint64_t>(checked));
        double detected = map_codelength(g, labels);
        double best = exhaustive_min_codelength(g);
        INFO("n=", n, " edges=", edges.size(), " detected=", detected, " best=", best);
        CHECK(detected == doctest::Approx(best).epsilon(1e-9));
        ++checked;
    }
}

TEST_CASE("ten-node graphs still reach the exhaustive optimum") {
    std::mt19937_64 rng(302);
    for (int iter = 0; iter < 3; ++iter) {
        int n = 10;
        std::vector<std::tuple<int, int, double>> edges;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (std::uniform_real_distribution<>(0, 1)(rng) < 0.35) {
                    edges.push_back({a, b, double(std::uniform_int_distribution<int>(1, 2)(rng))});
                }
            }
        }
        if (edges.empty()) continue;
        auto g = make_graph(n, edges);
        double detected = map_codelength(g, detect_labels(g, 50 + static_cast<std::uint64_t>(iter)));
        double best = exhaustive_min_codelength(g);
        CHECK(detected == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("nodes from different components never share a group") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 10; ++iter) {
        // three cliques of random sizes with no edges between them
        std::vector<std::tuple<int, int, int>> edges;
        std::vector<int> comp_of;
        int base = 0;
        for (int c = 0; c < 3; ++c) {
            int sz = std::uniform_int_distribution<int>(2, 5)(rng);
            for (int a = 0; a < sz; ++a) {
                comp_of.push_back(c);
                for (int b = a + 1; b < sz; ++b) edges.push_back({base + a, base + b, 1});
            }
            base += sz;
        }
        auto svn = svn_from_edges(base, edges);
        auto part = detect_communities(svn, 60 + static_cast<std::uint64_t>(iter));
        for (const auto& grp : part.groups) {
            for (int m : grp) CHECK(comp_of[static_cast<std::size_t>(m)] == comp_of[static_cast<std::size_t>(grp[0])]);
        }
    }
}

TEST_CASE("uniform edge-weight scaling leaves the partition alone") {
    std::mt19937_64 rng(23);
    std::vector<std::tuple<int, int, double>> edges;
    for (int a = 0; a < 12; ++a) {
        for (int b = a + 1; b < 12; ++b) {
            if (std::uniform_real_distribution<>(0, 1)(rng) < 0.3) {
                edges.push_back({a, b, double(std::uniform_int_distribution<int>(1, 3)(rng))});
            }
        }
    }
    auto g1 = make_graph(12, edges);
    for (auto& [a, b, w] : edges) w *= 5.0;
    auto g2 = make_graph(12, edges);
    CHECK(detect_labels(g1, 5) == detect_labels(g2, 5));
    CHECK(map_codelength(g1, detect_labels(g1, 5)) ==
          doctest::Approx(map_codelength(g2, detect_labels(g2, 5))).epsilon(1e-12));
}

TEST_CASE("an empty network yields an empty partition") {
    Svn svn;
    svn.trader_ids = {"T000", "T001"};
    auto part = detect_communities(svn, 9);
    CHECK(part.n_groups() == 0);
    CHECK(part.n_grouped() == 0);
}

TEST_CASE("summary statistics of a partition") {
    GroupPartition part;
    part.trader_ids.resize(10);
    part.groups = {{0, 1}, {2, 3, 4}};
    auto s = svn_summary(part, 10);
    CHECK(s.n_groups == 2);
    CHECK(s.fraction_grouped == doctest::Approx(0.5));
    CHECK(*s.mean_size == doctest::Approx(2.5));
    CHECK(*s.median_size == doctest::Approx(2.5));

    GroupPartition empty;
    auto e = svn_summary(empty, 10);
    CHECK(e.n_groups == 0);
    CHECK(e.fraction_grouped == 0.0);
    CHECK_FALSE(e.mean_size.has_value());
    CHECK_FALSE(e.median_size.has_value());

    GroupPartition one;
    one.trader_ids.resize(4);
    one.groups = {{0, 1, 2, 3}};
    auto o = svn_summary(one, 4);
    CHECK(o.n_groups == 1);
    CHECK(o.fraction_grouped == doctest::Approx(1.0));
    CHECK(*o.mean_size == doctest::Approx(4.0));
    CHECK(*o.median_size == doctest::Approx(4.0));

    CHECK_THROWS_AS(svn_summary(part, 0), DataError);
}

TEST_CASE("group states aggregate member volumes before thresholding") {
    StateMatrix sm;
    sm.trader_ids = {"T000", "T001"};
    sm.n_slices = 3;
    sm.rho0 = 0.01;
    sm.v = {100.0, 0.0, 10.0, -50.0, 0.0, 10.0};
    sm.a = {100.0, 0.0, 10.0, 50.0, 0.0, 10.0};
    sm.n_trades = {2, 0, 1, 1, 0, 1};
    sm.states.assign(6, kStateNA);
    for (std::size_t c = 0; c < 6; ++c) {
        if (sm.a[c] > 0.0) sm.states[c] = assign_state(sm.v[c] / sm.a[c], sm.rho0);
    }

    GroupPartition part;
    part.trader_ids = sm.trader_ids;
    part.groups = {{0, 1}};
    auto gs = group_state_series(part, sm, 0.01);
    REQUIRE(gs.n_groups == 1);
    CHECK(gs.v[0] == doctest::Approx(50.0));
    CHECK(gs.a[0] == doctest::Approx(150.0));
    CHECK(gs.sigma[0] == kStateBuy);  // rho = 1/3
    CHECK(gs.n_trades[0] == 3);
    CHECK(gs.sigma[1] == kStateNA);  // nobody traded
    CHECK(gs.sigma[2] == kStateBuy);  // both members bought
}

TEST_CASE("a group of same-state members keeps that state") {
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 50; ++iter) {
        int n = std::uniform_int_distribution<int>(2, 6)(rng);
        int sign = std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1;
        StateMatrix sm;
        sm.n_slices = 1;
        sm.rho0 = 0.01;
        GroupPartition part;
        part.groups.push_back({});
        for (int i = 0; i < n; ++i) {
            sm.trader_ids.push_back("T" + std::to_string(i));
            part.groups[0].push_back(i);
            // each member's own rho strictly beyond the dead zone
            double a = std::uniform_real_distribution<>(1.0, 100.0)(rng);
            double rho = std::uniform_real_distribution<>(0.2, 1.0)(rng);
            sm.v.push_back(sign * a * rho);
            sm.a.push_back(a);
            sm.n_trades.push_back(1);
            sm.states.push_back(sign > 0 ? kStateBuy : kStateSell);
        }
        part.trader_ids = sm.trader_ids;
        auto gs = group_state_series(part, sm, 0.01);
        CHECK(gs.sigma[0] == (sign > 0 ? kStateBuy : kStateSell));
    }
}

TEST_CASE("adjusted Rand index fixed points") {
    std::vector<int> a = {0, 0, 1, 1, 2};
    CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));

    std::vector<int> relabeled = {5, 5, 9, 9, 1};
    CHECK(adjusted_rand_index(a, relabeled) == doctest::Approx(1.0));

    std::vector<int> x = {0, 0, 1, 1};
    std::vector<int> y = {0, 1, 0, 1};
    CHECK(adjusted_rand_index(x, y) == doctest::Approx(-0.5));

    // independent labelings hover near zero
    std::mt19937_64 rng(5);
    std::vector<int> u(2000), v(2000);
    for (auto& k : u) k = std::uniform_int_distribution<int>(0, 4)(rng);
    for (auto& k : v) k = std::uniform_int_distribution<int>(0, 4)(rng);
    CHECK(std::abs(adjusted_rand_index(u, v)) < 0.05);

    CHECK_THROWS_AS(adjusted_rand_index(a, x), DataError);
}

TEST_CASE("partition rows serialize in group order") {
    GroupPartition part;
    part.window_id = 2;
    part.delta_t_s = 600;
    part.trader_ids = {"T000", "T001", "T002", "T003"};
    part.groups = {{0, 3}, {1}};
    std::ostringstream out;
    export_partition(part, out);
    CHECK(out.str() ==
          "window_id,delta_t,group_id,trader_id\n"
          "2,600,0,T000\n"
          "2,600,0,T003\n"
          "2,600,1,T001\n");
}
