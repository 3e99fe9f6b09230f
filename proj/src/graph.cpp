#include "alge/graph.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "alge/error.hpp"
#include "alge/rng.hpp"

namespace alge {

Graph Graph::from_edges(NodeId n, std::vector<Edge> edges) {
    if (n < 0) throw std::invalid_argument("node count must be nonnegative");
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    std::vector<NodeId> deg(n, 0);
    for (const auto& [u, v] : g.edges_) {
        ++deg[u];
        ++deg[v];
    }
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (NodeId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.adj_.resize(static_cast<std::size_t>(g.offsets_[n]));
    std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : g.edges_) {
        g.adj_[cursor[u]++] = v;
        g.adj_[cursor[v]++] = u;
    }
    for (NodeId v = 0; v < n; ++v)
        std::sort(g.adj_.begin() + g.offsets_[v], g.adj_.begin() + g.offsets_[v + 1]);
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Graph load_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::unordered_map<long long, NodeId> remap;
    NodeId next_id = 0;
    auto intern = [&](long long raw) {
        auto [it, inserted] = remap.emplace(raw, next_id);
        if (inserted) ++next_id;
        return it->second;
    };

    std::string line;
    int line_no = 0;
    bool saw_edge_line = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        std::istringstream ls(line);
        long long a, b;
        if (!(ls >> a)) {
            std::string tok;
            std::istringstream probe(line);
            if (probe >> tok) throw ParseError(line_no, "expected integer node id, got '" + tok + "'");
            continue;  // blank or comment-only line
        }
        if (!(ls >> b)) throw ParseError(line_no, "expected two node ids");
        std::string extra;
        if (ls >> extra) throw ParseError(line_no, "unexpected trailing token '" + extra + "'");
        saw_edge_line = true;
        NodeId u = intern(a);
        NodeId v = intern(b);
        if (u != v) edges.emplace_back(u, v);
    }
    if (!saw_edge_line) throw DataError("edge list is empty");
    return Graph::from_edges(next_id, std::move(edges));
}

Graph load_edge_list(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph generate_ba(NodeId n, NodeId m, std::uint64_t seed) {
    if (m < 1 || n <= m) throw std::invalid_argument("generate_ba requires n > m >= 1");
    std::vector<Edge> edges;
    std::vector<NodeId> ends;  // one entry per edge endpoint; degree-proportional pool
    for (NodeId u = 0; u <= m; ++u)
        for (NodeId v = u + 1; v <= m; ++v) {
            edges.emplace_back(u, v);
            ends.push_back(u);
            ends.push_back(v);
        }
    SplitMix64 rng(derive_stream(seed, 0xBA));
    std::vector<NodeId> targets;
    for (NodeId v = m + 1; v < n; ++v) {
        targets.clear();
        while (static_cast<NodeId>(targets.size()) < m) {
            NodeId t = ends[rng.uniform_index(ends.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, v);
            ends.push_back(t);
            ends.push_back(v);
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

Graph generate_er(NodeId n, std::int64_t m_target, std::uint64_t seed) {
    const std::int64_t max_edges = static_cast<std::int64_t>(n) * (n - 1) / 2;
    if (m_target < 0 || m_target > max_edges)
        throw std::invalid_argument("generate_er: m_target out of [0, n*(n-1)/2]");
    SplitMix64 rng(derive_stream(seed, 0xE6));

    auto sample_pairs = [&](std::int64_t count) {
        std::unordered_set<std::uint64_t> seen;
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(count));
        while (static_cast<std::int64_t>(out.size()) < count) {
            NodeId u = static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            NodeId v = static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            std::uint64_t key = static_cast<std::uint64_t>(u) * n + v;
            if (seen.insert(key).second) out.emplace_back(u, v);
        }
        return out;
    };

    std::vector<Edge> edges;
    if (m_target * 2 <= max_edges) {
        edges = sample_pairs(m_target);
    } else {
        // dense case: sample the complement instead
        auto excluded = sample_pairs(max_edges - m_target);
        std::unordered_set<std::uint64_t> ex;
        for (const auto& [u, v] : excluded) ex.insert(static_cast<std::uint64_t>(u) * n + v);
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (!ex.count(static_cast<std::uint64_t>(u) * n + v)) edges.emplace_back(u, v);
    }
    return Graph::from_edges(n, std::move(edges));
}

std::vector<NodeId> bfs_order(const Graph& g, NodeId source) {
    if (source < 0 || source >= g.num_nodes())
        throw std::invalid_argument("bfs_order: source out of range");
    std::vector<char> visited(g.num_nodes(), 0);
    std::vector<NodeId> order{source}, frontier{source}, next;
    visited[source] = 1;
    while (!frontier.empty()) {
        next.clear();
        for (NodeId u : frontier)
            for (NodeId v : g.neighbors(u))
                if (!visited[v]) {
                    visited[v] = 1;
                    next.push_back(v);
                }
        std::sort(next.begin(), next.end());
        order.insert(order.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    return order;
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
    std::vector<int> dist(g.num_nodes(), -1);
    std::vector<NodeId> frontier{source}, next;
    dist[source] = 0;
    int d = 0;
    while (!frontier.empty()) {
        ++d;
        next.clear();
        for (NodeId u : frontier)
            for (NodeId v : g.neighbors(u))
                if (dist[v] < 0) {
                    dist[v] = d;
                    next.push_back(v);
                }
        frontier.swap(next);
    }
    return dist;
}

std::vector<NodeId> component_ids(const Graph& g) {
    std::vector<NodeId> comp(g.num_nodes(), -1);
    NodeId label = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.num_nodes(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = label;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u))
                if (comp[v] < 0) {
                    comp[v] = label;
                    stack.push_back(v);
                }
        }
        ++label;
    }
    return comp;
}

std::vector<NodeId> core_numbers(const Graph& g) {
    const NodeId n = g.num_nodes();
    std::vector<NodeId> deg(n), core(n, 0);
    NodeId max_deg = 0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    // bucket sort by degree (Batagelj-Zaversnik peeling)
    std::vector<NodeId> bin(max_deg + 2, 0), pos(n), vert(n);
    for (NodeId v = 0; v < n; ++v) ++bin[deg[v] + 1];
    for (NodeId d = 1; d <= max_deg + 1; ++d) bin[d] += bin[d - 1];
    std::vector<NodeId> cursor(bin.begin(), bin.end());
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = cursor[deg[v]]++;
        vert[pos[v]] = v;
    }
    std::vector<NodeId> start(bin.begin(), bin.end() - 1);
    for (NodeId i = 0; i < n; ++i) {
        NodeId v = vert[i];
        core[v] = deg[v];
        for (NodeId u : g.neighbors(v)) {
            if (deg[u] > deg[v]) {
                NodeId du = deg[u], pu = pos[u];
                NodeId pw = start[du], w = vert[pw];
                if (u != w) {
                    std::swap(vert[pu], vert[pw]);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                ++start[du];
                --deg[u];
            }
        }
    }
    return core;
}

DegreeStats degree_stats(const Graph& g) {
    const NodeId n = g.num_nodes();
    if (n < 1) throw std::invalid_argument("degree_stats requires n >= 1");
    std::uint64_t sum = 0, sum_sq = 0;
    for (NodeId v = 0; v < n; ++v) {
        std::uint64_t d = static_cast<std::uint64_t>(g.degree(v));
        sum += d;
        sum_sq += d * d;
    }
    return {static_cast<double>(sum) / n, static_cast<double>(sum_sq) / n};
}

std::vector<double> clustering_coefficients(const Graph& g) {
    const NodeId n = g.num_nodes();
    std::vector<double> cc(n, 0.0);
    std::vector<char> mark(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        const auto nb = g.neighbors(v);
        const NodeId d = static_cast<NodeId>(nb.size());
        if (d < 2) continue;
        for (NodeId u : nb) mark[u] = 1;
        std::int64_t links = 0;
        for (NodeId u : nb)
            for (NodeId w : g.neighbors(u))
                if (w > u && mark[w]) ++links;
        for (NodeId u : nb) mark[u] = 0;
        cc[v] = 2.0 * static_cast<double>(links) / (static_cast<double>(d) * (d - 1));
    }
    return cc;
}

std::vector<double> average_neighbor_degrees(const Graph& g) {
    const NodeId n = g.num_nodes();
    std::vector<double> out(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        const auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        std::uint64_t sum = 0;
        for (NodeId u : nb) sum += static_cast<std::uint64_t>(g.degree(u));
        out[v] = static_cast<double>(sum) / static_cast<double>(nb.size());
    }
    return out;
}

NodeFeature node_feature_from_name(const std::string& name) {
    if (name == "degree") return NodeFeature::Degree;
    if (name == "core") return NodeFeature::CoreNumber;
    if (name == "clustering") return NodeFeature::Clustering;
    if (name == "avg_neighbor_degree") return NodeFeature::AvgNeighborDegree;
    throw std::invalid_argument("unknown node feature '" + name + "'");
}

std::string node_feature_name(NodeFeature f) {
    switch (f) {
        case NodeFeature::Degree: return "degree";
        case NodeFeature::CoreNumber: return "core";
        case NodeFeature::Clustering: return "clustering";
        case NodeFeature::AvgNeighborDegree: return "avg_neighbor_degree";
    }
    throw std::invalid_argument("bad NodeFeature");
}

NodeFeatures node_features(const Graph& g, std::span<const NodeFeature> features) {
    const NodeId n = g.num_nodes();
    if (n < 2) throw std::invalid_argument("node_features requires n >= 2");
    if (features.empty()) throw std::invalid_argument("node_features: empty feature set");

    NodeFeatures out;
    out.n = n;
    out.dim = static_cast<int>(features.size());
    out.data.resize(static_cast<std::size_t>(n) * out.dim);

    std::vector<double> col(n);
    for (int k = 0; k < out.dim; ++k) {
        switch (features[k]) {
            case NodeFeature::Degree:
                for (NodeId v = 0; v < n; ++v) col[v] = g.degree(v);
                break;
            case NodeFeature::CoreNumber: {
                auto core = core_numbers(g);
                for (NodeId v = 0; v < n; ++v) col[v] = core[v];
                break;
            }
            case NodeFeature::Clustering:
                col = clustering_coefficients(g);
                break;
            case NodeFeature::AvgNeighborDegree:
                col = average_neighbor_degrees(g);
                break;
        }
        auto [mn, mx] = std::minmax_element(col.begin(), col.end());
        const double lo = *mn, span = *mx - *mn;
        for (NodeId v = 0; v < n; ++v)
            out.data[static_cast<std::size_t>(v) * out.dim + k] =
                span > 0 ? (col[v] - lo) / span : 0.0;
    }
    return out;
}

}  // namespace alge
