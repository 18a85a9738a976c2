#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "botsim/errors.hpp"
#include "botsim/network.hpp"

using namespace botsim;

namespace {

Network from_pairs(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) { return Network::from_edges(n, edges); }

Network complete(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return from_pairs(n, e);
}

// Brute-force oracles: triangle enumeration and Floyd-Warshall.
double brute_clustering(const Network& g) {
    const std::size_t n = g.node_count();
    auto adjacent = [&](NodeId a, NodeId b) {
        auto nb = g.neighbors(a);
        return std::find(nb.begin(), nb.end(), b) != nb.end();
    };
    double sum = 0;
    for (NodeId v = 0; v < n; ++v) {
        auto nb = g.neighbors(v);
        if (nb.size() < 2) continue;
        std::size_t closed = 0;
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) closed += adjacent(nb[i], nb[j]);
        sum += static_cast<double>(closed) / (static_cast<double>(nb.size() * (nb.size() - 1)) / 2.0);
    }
    return sum / static_cast<double>(n);
}

double brute_mean_path(const Network& g) {
    const std::size_t n = g.node_count();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (NodeId i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (NodeId j : g.neighbors(i)) d[i][j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d[i][j] < inf) {
                sum += d[i][j];
                ++pairs;
            }
    return sum / static_cast<double>(pairs);
}

void check_invariants(const Network& g) {
    std::size_t degree_sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto nb = g.neighbors(v);
        degree_sum += nb.size();
        std::set<NodeId> seen(nb.begin(), nb.end());
        REQUIRE(seen.size() == nb.size());
        REQUIRE(!seen.contains(v));
        for (NodeId u : nb) {
            auto back = g.neighbors(u);
            REQUIRE(std::find(back.begin(), back.end(), v) != back.end());
        }
    }
    CHECK(degree_sum == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("ring lattice with beta 0") {
    Rng rng(1);
    SUBCASE("5-cycle") {
        const Network g = generate_small_world({.n = 5, .k = 2, .beta = 0.0}, rng);
        for (NodeId v = 0; v < 5; ++v) CHECK(g.degree(v) == 2);
        CHECK(clustering_coefficient(g) == 0.0);
        CHECK(mean_path_length(g) == doctest::Approx(1.5));
        CHECK(brute_mean_path(g) == doctest::Approx(1.5));
    }
    SUBCASE("n=20 k=4 clustering 0.5") {
        const Network g = generate_small_world({.n = 20, .k = 4, .beta = 0.0}, rng);
        for (NodeId v = 0; v < 20; ++v) CHECK(g.degree(v) == 4);
        CHECK(brute_clustering(g) == doctest::Approx(0.5));
        CHECK(clustering_coefficient(g) == doctest::Approx(0.5));
    }
}

TEST_CASE("diagnostics on small graphs") {
    const Network k4 = complete(4);
    CHECK(clustering_coefficient(k4) == doctest::Approx(1.0));
    CHECK(mean_path_length(k4) == doctest::Approx(1.0));
    const Network path = from_pairs(3, {{0, 1}, {1, 2}});
    CHECK(mean_path_length(path) == doctest::Approx(4.0 / 3.0));
    CHECK(clustering_coefficient(path) == 0.0);

    // Two components: diagnostics use the larger one.
    const Network split = from_pairs(6, {{0, 1}, {1, 2}, {2, 3}, {4, 5}});
    CHECK(largest_component(split).size() == 4);
    CHECK(mean_path_length(split) == doctest::Approx((1 + 2 + 3 + 1 + 2 + 1) / 6.0));

    CHECK_THROWS_AS(mean_path_length(Network{}), ParameterError);
}

TEST_CASE("diagnostics agree with brute force on random graphs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const Network g = generate_small_world({.n = 30, .k = 4, .beta = 0.3}, rng);
        check_invariants(g);
        CHECK(clustering_coefficient(g) == doctest::Approx(brute_clustering(g)).epsilon(1e-12));
        CHECK(mean_path_length(g) == doctest::Approx(brute_mean_path(g)).epsilon(1e-12));
    }
}

TEST_CASE("default-size small world") {
    Rng rng(42);
    const Network g = generate_small_world({.n = 1200, .k = 10, .beta = 0.05}, rng);
    check_invariants(g);
    CHECK(g.edge_count() == 6000);
    CHECK(clustering_coefficient(g) > 0.5);
    CHECK(mean_path_length(g) < 8.0);
}

TEST_CASE("edge count is preserved for any beta") {
    for (double beta : {0.0, 0.1, 0.5, 1.0}) {
        Rng rng(7);
        const Network g = generate_small_world({.n = 101, .k = 6, .beta = beta}, rng);
        CHECK(g.edge_count() == 101 * 3);
        check_invariants(g);
    }
}

TEST_CASE("rewired fraction is within three binomial sigma of beta") {
    // A lattice edge (i, i+j mod n) that is absent after generation was rewired.
    const std::size_t n = 200, k = 6;
    const double beta = 0.2;
    std::size_t trials = 0, rewired = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const Network g = generate_small_world({.n = n, .k = k, .beta = beta}, rng);
        std::set<std::pair<NodeId, NodeId>> edges;
        for (auto e : g.edges()) edges.insert(e);
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 1; j <= k / 2; ++j) {
                NodeId a = i, b = static_cast<NodeId>((i + j) % n);
                if (a > b) std::swap(a, b);
                ++trials;
                rewired += !edges.contains({a, b});
            }
    }
    // A rewired edge can be recreated by a later rewiring, so the observed
    // fraction is slightly below beta; the bound stays two-sided.
    const double frac = static_cast<double>(rewired) / static_cast<double>(trials);
    const double sigma = std::sqrt(beta * (1 - beta) / static_cast<double>(trials));
    CHECK(std::abs(frac - beta) < 3 * sigma + 0.01);
}

TEST_CASE("generation is deterministic in the seed") {
    Rng a(99), b(99), c(100);
    const SmallWorldSpec spec{.n = 300, .k = 10, .beta = 0.05};
    const Network ga = generate_small_world(spec, a);
    CHECK(ga == generate_small_world(spec, b));
    CHECK_FALSE(ga == generate_small_world(spec, c));

    std::ostringstream sa, sb;
    write_edge_list(ga, sa);
    Rng a2(99);
    write_edge_list(generate_small_world(spec, a2), sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("edge list format") {
    const Network g = from_pairs(4, {{2, 1}, {0, 3}, {0, 1}});
    std::ostringstream s;
    write_edge_list(g, s);
    CHECK(s.str() == "0 1\n0 3\n1 2\n");
}

TEST_CASE("invalid specs") {
    Rng rng(0);
    CHECK_THROWS_AS(generate_small_world({.n = 10, .k = 3, .beta = 0.1}, rng), ParameterError);
    CHECK_THROWS_AS(generate_small_world({.n = 10, .k = 10, .beta = 0.1}, rng), ParameterError);
    CHECK_THROWS_AS(generate_small_world({.n = 10, .k = 4, .beta = 1.5}, rng), ParameterError);
    CHECK_THROWS_AS(from_pairs(3, {{0, 0}}), ParameterError);
    CHECK_THROWS_AS(from_pairs(3, {{0, 1}, {1, 0}}), ParameterError);
}

TEST_CASE("erdos-renyi fallback") {
    Rng rng(5);
    SmallWorldSpec spec{.n = 400, .k = 10, .beta = 0.05, .model = NetworkModel::ErdosRenyi};
    const Network g = generate_network(spec, rng);
    check_invariants(g);
    const double expected = 0.05 * 400 * 399 / 2;
    CHECK(std::abs(static_cast<double>(g.edge_count()) - expected) < 4 * std::sqrt(expected));
}
