#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ocnreg/graph.hpp"
#include "oracles.hpp"

using ocnreg::ChannelGraph;
using ocnreg::JunctionNetwork;

namespace {

// the 22-junction, 25-channel study network shipped in scenarios/
const std::vector<std::pair<int, int>> kMesh22 = {
    {1, 15}, {1, 22}, {2, 4},   {3, 8},   {3, 20},  {4, 11},  {4, 12},  {5, 14}, {5, 15},
    {5, 18}, {6, 8},  {7, 9},   {7, 17},  {8, 9},   {8, 21},  {9, 11},  {10, 11}, {10, 16},
    {10, 22}, {12, 19}, {13, 17}, {15, 18}, {16, 20}, {17, 19}, {18, 19}};

JunctionNetwork random_network(std::mt19937_64& rng, int max_junctions, int max_channels) {
    const int m = 3 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_junctions - 2));
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    for (int v = 2; v <= m; ++v) {
        const int u = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(v - 1));
        edges.emplace_back(std::min(u, v), std::max(u, v));
        seen.insert(edges.back());
    }
    const int extra = static_cast<int>(rng() % 4);
    for (int t = 0; t < extra && static_cast<int>(edges.size()) < max_channels; ++t) {
        const int u = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m));
        const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m));
        if (u == v) continue;
        auto e = std::make_pair(std::min(u, v), std::max(u, v));
        if (seen.insert(e).second) edges.push_back(e);
    }
    return JunctionNetwork::from_edges(m, std::move(edges));
}

}  // namespace

TEST_CASE("two channels in a line coordinate through their shared junction") {
    auto net = JunctionNetwork::from_edges(3, {{1, 2}, {2, 3}});
    auto g = ChannelGraph::from_network(net);
    REQUIRE(g.size() == 2);
    REQUIRE(g.edge_count() == 1);
    REQUIRE(g.degree(0) == 1);
    REQUIRE(g.radius() == 1);
    REQUIRE(g.diameter() == 1);
    REQUIRE(ocnreg::coordination_edge_count(net) == 1);
}

TEST_CASE("channels of a star junction are mutually coordinated") {
    auto net = JunctionNetwork::from_edges(4, {{1, 2}, {1, 3}, {1, 4}});
    auto g = ChannelGraph::from_network(net);
    REQUIRE(g.size() == 3);
    REQUIRE(g.edge_count() == 3);
    for (int i = 0; i < 3; ++i) REQUIRE(g.degree(i) == 2);
    REQUIRE(ocnreg::coordination_edge_count(net) == 3);
}

TEST_CASE("complete 22-junction network coordination facts") {
    auto net = JunctionNetwork::complete(22);
    auto g = ChannelGraph::from_network(net);
    REQUIRE(g.size() == 231);
    REQUIRE(g.edge_count() == 4620);
    REQUIRE(g.min_degree() == 40);
    REQUIRE(g.max_degree() == 40);
    REQUIRE(g.radius() == 2);
    REQUIRE(g.diameter() == 2);
    REQUIRE(ocnreg::coordination_edge_count(net) == 4620);
    REQUIRE(g.connected());
}

TEST_CASE("study network coordination facts") {
    auto net = JunctionNetwork::from_edges(22, kMesh22);
    REQUIRE(net.channels.size() == 25);
    auto g = ChannelGraph::from_network(net);
    REQUIRE(g.size() == 25);
    REQUIRE(g.edge_count() == 40);
    REQUIRE(ocnreg::coordination_edge_count(net) == 40);
    REQUIRE(g.min_degree() == 2);
    REQUIRE(g.max_degree() == 5);
    REQUIRE(g.radius() == 5);
    REQUIRE(g.diameter() == 7);

    auto center = g.center();
    REQUIRE(center.size() == 9);
    bool has_4_11 = false;
    for (int c : center) has_4_11 = has_4_11 || g.label(c) == std::make_pair(4, 11);
    REQUIRE(has_4_11);
}

TEST_CASE("coordination adjacency matches the incidence product") {
    std::mt19937_64 rng(7041);
    std::vector<JunctionNetwork> nets;
    nets.push_back(JunctionNetwork::from_edges(3, {{1, 2}, {2, 3}}));
    nets.push_back(JunctionNetwork::from_edges(4, {{1, 2}, {1, 3}, {1, 4}}));
    nets.push_back(JunctionNetwork::complete(6));
    nets.push_back(JunctionNetwork::from_edges(22, kMesh22));
    for (int t = 0; t < 20; ++t) nets.push_back(random_network(rng, 10, 16));

    for (const auto& net : nets) {
        auto g = ChannelGraph::from_network(net);
        auto a = oracles::adjacency_from_incidence(net);
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::set<int> expected;
            for (std::size_t j = 0; j < g.size(); ++j)
                if (a(i, j) != 0.0) expected.insert(static_cast<int>(j));
            std::set<int> got(g.neighbors(static_cast<int>(i)).begin(),
                              g.neighbors(static_cast<int>(i)).end());
            REQUIRE(got == expected);
        }
        REQUIRE(static_cast<long long>(g.edge_count()) == ocnreg::coordination_edge_count(net));
    }
}

TEST_CASE("hop metrics match Floyd-Warshall") {
    std::mt19937_64 rng(1228);
    for (int t = 0; t < 15; ++t) {
        auto net = random_network(rng, 9, 14);
        auto g = ChannelGraph::from_network(net);
        if (!g.connected()) continue;
        auto d = oracles::all_pairs_distances(g);
        auto ecc = g.eccentricities();
        int radius = 1 << 20, diameter = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            int far = 0;
            for (std::size_t j = 0; j < g.size(); ++j) far = std::max(far, d[i][j]);
            REQUIRE(ecc[i] == far);
            radius = std::min(radius, far);
            diameter = std::max(diameter, far);
        }
        REQUIRE(g.radius() == radius);
        REQUIRE(g.diameter() == diameter);
    }
}

TEST_CASE("edge list text accepts comments and rejects malformed input") {
    auto net = JunctionNetwork::from_edge_list_text("# comment\n1 2\n\n2 3\n");
    REQUIRE(net.junction_count == 3);
    REQUIRE(net.channels.size() == 2);

    REQUIRE_THROWS_AS(JunctionNetwork::from_edge_list_text("1 2\n2 2\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(JunctionNetwork::from_edge_list_text("1 2\n2 1\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(JunctionNetwork::from_edge_list_text("1 2 3\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(JunctionNetwork::from_edge_list_text("1 x\n"), std::invalid_argument);
    // junction 2 exists but touches nothing
    REQUIRE_THROWS_AS(JunctionNetwork::from_edge_list_text("1 3\n"), std::invalid_argument);
}

TEST_CASE("network validation") {
    REQUIRE_THROWS_AS(JunctionNetwork::from_edges(2, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(JunctionNetwork::from_edges(2, {{1, 1}}), std::invalid_argument);
    REQUIRE_THROWS_AS(JunctionNetwork::from_edges(2, {{1, 3}}), std::invalid_argument);
    REQUIRE_THROWS_AS(JunctionNetwork::from_edges(3, {{1, 2}, {1, 2}}), std::invalid_argument);

    auto net = JunctionNetwork::from_edges(3, {{2, 1}, {3, 2}});
    REQUIRE(net.channels == std::vector<std::pair<int, int>>{{1, 2}, {2, 3}});
    REQUIRE(net.channel_index(2, 1) == 0);
    REQUIRE(net.channel_index(1, 3) == -1);
}

TEST_CASE("a split network yields a disconnected coordination graph") {
    auto net = JunctionNetwork::from_edges(4, {{1, 2}, {3, 4}});
    auto g = ChannelGraph::from_network(net);
    REQUIRE_FALSE(g.connected());
    REQUIRE_THROWS_AS(g.eccentricities(), std::runtime_error);
}
