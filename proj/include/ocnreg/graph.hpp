#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ocnreg {

/**
 * @brief Physical layout of an open-channel network.
 *
 * Junctions are numbered 1..junction_count. Each channel connects two
 * distinct junctions and is stored with its endpoints sorted. Channels
 * are kept in lexicographic order; a channel's position in this list is
 * its index everywhere else in the library.
 */
struct JunctionNetwork {
    int junction_count = 0;
    std::vector<std::pair<int, int>> channels;

    static JunctionNetwork from_edges(int junctions, std::vector<std::pair<int, int>> edges) {
        if (junctions < 2) throw std::invalid_argument("network needs at least two junctions");
        for (auto& [u, v] : edges) {
            if (u == v) throw std::invalid_argument("channel endpoints must differ");
            if (u < 1 || v < 1 || u > junctions || v > junctions)
                throw std::invalid_argument("channel endpoint out of junction range");
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw std::invalid_argument("duplicate channel between the same junction pair");
        if (edges.empty()) throw std::invalid_argument("network has no channels");

        JunctionNetwork net;
        net.junction_count = junctions;
        net.channels = std::move(edges);

        std::vector<int> deg(static_cast<std::size_t>(junctions) + 1, 0);
        for (auto [u, v] : net.channels) {
            ++deg[static_cast<std::size_t>(u)];
            ++deg[static_cast<std::size_t>(v)];
        }
        for (int j = 1; j <= junctions; ++j)
            if (deg[static_cast<std::size_t>(j)] == 0)
                throw std::invalid_argument("junction " + std::to_string(j) + " touches no channel");
        return net;
    }

    // every junction pair joined by one channel
    static JunctionNetwork complete(int junctions) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 1; u <= junctions; ++u)
            for (int v = u + 1; v <= junctions; ++v) edges.emplace_back(u, v);
        return from_edges(junctions, std::move(edges));
    }

    /**
     * Plain text listing, one channel per line as "u v". Lines that are
     * empty or start with '#' are skipped.
     */
    static JunctionNetwork from_edge_list_text(const std::string& text) {
        std::vector<std::pair<int, int>> edges;
        int max_junction = 0;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream ls(line);
            int u = 0, v = 0;
            if (!(ls >> u >> v))
                throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                            ": expected two junction numbers");
            std::string rest;
            if (ls >> rest)
                throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                            ": trailing content '" + rest + "'");
            edges.emplace_back(u, v);
            max_junction = std::max({max_junction, u, v});
        }
        return from_edges(max_junction, std::move(edges));
    }

    std::vector<int> junction_degrees() const {
        std::vector<int> deg(static_cast<std::size_t>(junction_count) + 1, 0);
        for (auto [u, v] : channels) {
            ++deg[static_cast<std::size_t>(u)];
            ++deg[static_cast<std::size_t>(v)];
        }
        return deg;  // index 0 unused
    }

    int channel_index(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(channels.begin(), channels.end(), std::make_pair(u, v));
        if (it == channels.end() || *it != std::make_pair(u, v)) return -1;
        return static_cast<int>(it - channels.begin());
    }
};

/**
 * Channel count of the coordination graph predicted from junction degrees
 * alone: -n + (sum of squared junction degrees) / 2, where n is the number
 * of channels. The degree-square sum is always even.
 */
inline long long coordination_edge_count(const JunctionNetwork& net) {
    long long sq = 0;
    auto deg = net.junction_degrees();
    for (int j = 1; j <= net.junction_count; ++j) {
        long long d = deg[static_cast<std::size_t>(j)];
        sq += d * d;
    }
    return -static_cast<long long>(net.channels.size()) + sq / 2;
}

/**
 * @brief Coordination graph: one vertex per channel, an edge between two
 * channels whenever they meet at a junction.
 *
 * This is the graph the consensus iteration runs on. Agents sit on
 * channels and exchange values only with channels they physically touch.
 */
class ChannelGraph {
public:
    static ChannelGraph from_network(const JunctionNetwork& net) {
        ChannelGraph g;
        g.labels_ = net.channels;
        const std::size_t n = net.channels.size();
        g.adj_.assign(n, {});

        // group channels by the junctions they touch, then link within groups
        std::vector<std::vector<int>> at_junction(static_cast<std::size_t>(net.junction_count) + 1);
        for (std::size_t c = 0; c < n; ++c) {
            at_junction[static_cast<std::size_t>(net.channels[c].first)].push_back(static_cast<int>(c));
            at_junction[static_cast<std::size_t>(net.channels[c].second)].push_back(static_cast<int>(c));
        }
        std::vector<std::set<int>> nbr(n);
        for (const auto& group : at_junction)
            for (std::size_t a = 0; a < group.size(); ++a)
                for (std::size_t b = a + 1; b < group.size(); ++b) {
                    nbr[static_cast<std::size_t>(group[a])].insert(group[b]);
                    nbr[static_cast<std::size_t>(group[b])].insert(group[a]);
                }
        for (std::size_t c = 0; c < n; ++c) g.adj_[c].assign(nbr[c].begin(), nbr[c].end());
        return g;
    }

    std::size_t size() const { return adj_.size(); }
    const std::vector<int>& neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }
    int degree(int i) const { return static_cast<int>(adj_[static_cast<std::size_t>(i)].size()); }

    // endpoints of the physical channel a vertex stands for
    const std::pair<int, int>& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& a : adj_) twice += a.size();
        return twice / 2;
    }

    int min_degree() const {
        int m = degree(0);
        for (std::size_t i = 1; i < size(); ++i) m = std::min(m, degree(static_cast<int>(i)));
        return m;
    }

    int max_degree() const {
        int m = degree(0);
        for (std::size_t i = 1; i < size(); ++i) m = std::max(m, degree(static_cast<int>(i)));
        return m;
    }

    bool connected() const {
        if (adj_.empty()) return false;
        auto d = bfs_distances(0);
        return std::find(d.begin(), d.end(), -1) == d.end();
    }

    // hop distances from a start vertex; -1 marks unreachable vertices
    std::vector<int> bfs_distances(int start) const {
        std::vector<int> dist(size(), -1);
        std::queue<int> q;
        dist[static_cast<std::size_t>(start)] = 0;
        q.push(start);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj_[static_cast<std::size_t>(u)])
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
        }
        return dist;
    }

    std::vector<int> eccentricities() const {
        std::vector<int> ecc(size(), 0);
        for (std::size_t s = 0; s < size(); ++s) {
            auto d = bfs_distances(static_cast<int>(s));
            int far = 0;
            for (int v : d) {
                if (v < 0) throw std::runtime_error("eccentricity undefined: graph is disconnected");
                far = std::max(far, v);
            }
            ecc[s] = far;
        }
        return ecc;
    }

    int radius() const {
        auto e = eccentricities();
        return *std::min_element(e.begin(), e.end());
    }

    int diameter() const {
        auto e = eccentricities();
        return *std::max_element(e.begin(), e.end());
    }

    // vertices whose eccentricity equals the radius
    std::vector<int> center() const {
        auto e = eccentricities();
        int r = *std::min_element(e.begin(), e.end());
        std::vector<int> c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] == r) c.push_back(static_cast<int>(i));
        return c;
    }

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> labels_;
};

}  // namespace ocnreg
