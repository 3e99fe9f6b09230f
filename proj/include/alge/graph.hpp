#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace alge {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph with contiguous node ids 0..n-1.
/// Immutable after construction; safe to share across concurrent readers.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an edge list. Self-loops are dropped, duplicate and
    /// reversed edges collapse to one. Endpoints must lie in [0, n).
    static Graph from_edges(NodeId n, std::vector<Edge> edges);

    NodeId num_nodes() const { return n_; }
    std::int64_t num_edges() const { return static_cast<std::int64_t>(edges_.size()); }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    NodeId degree(NodeId v) const { return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Canonical edge list: u < v, sorted lexicographically.
    const std::vector<Edge>& edges() const { return edges_; }

private:
    NodeId n_ = 0;
    std::vector<std::int64_t> offsets_{0};
    std::vector<NodeId> adj_;
    std::vector<Edge> edges_;
};

/// Parses a whitespace-separated edge list. '#' starts a comment, CRLF is
/// accepted, original ids are remapped to 0..n-1 in first-appearance order.
/// Throws ParseError on malformed tokens and DataError on empty input.
Graph load_edge_list(std::istream& in);
Graph load_edge_list(const std::string& text);

/// Writes the canonical edge list, one "u v" pair per line.
void write_edge_list(std::ostream& out, const Graph& g);

/// Barabasi-Albert graph: clique on m+1 nodes, then every new node attaches to
/// m distinct existing nodes sampled proportionally to degree (without
/// replacement). Deterministic per seed. Requires n > m >= 1.
Graph generate_ba(NodeId n, NodeId m, std::uint64_t seed);

/// Uniform simple graph with exactly m_target edges. Deterministic per seed.
/// Requires 0 <= m_target <= n*(n-1)/2.
Graph generate_er(NodeId n, std::int64_t m_target, std::uint64_t seed);

/// BFS order from source: nondecreasing hop distance, ascending node id within
/// a distance level, restricted to source's component.
std::vector<NodeId> bfs_order(const Graph& g, NodeId source);

/// Hop distances from source; -1 for unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

/// Connected-component label per node; labels are 0-based in order of the
/// smallest node id in each component.
std::vector<NodeId> component_ids(const Graph& g);

/// k-core decomposition values.
std::vector<NodeId> core_numbers(const Graph& g);

struct DegreeStats {
    double mean;     // <k>
    double mean_sq;  // <k^2>
};

/// Exact degree means over all nodes. Requires n >= 1.
DegreeStats degree_stats(const Graph& g);

/// Local clustering coefficient per node (0 for degree < 2).
std::vector<double> clustering_coefficients(const Graph& g);

/// Mean neighbor degree per node (0 for isolated nodes).
std::vector<double> average_neighbor_degrees(const Graph& g);

enum class NodeFeature { Degree, CoreNumber, Clustering, AvgNeighborDegree };

NodeFeature node_feature_from_name(const std::string& name);
std::string node_feature_name(NodeFeature f);

/// Row-major n x dim feature matrix, min-max normalized per column.
struct NodeFeatures {
    NodeId n = 0;
    int dim = 0;
    std::vector<double> data;

    double at(NodeId v, int k) const { return data[static_cast<std::size_t>(v) * dim + k]; }
};

inline constexpr NodeFeature kDefaultFeatures[] = {
    NodeFeature::Degree, NodeFeature::CoreNumber, NodeFeature::Clustering,
    NodeFeature::AvgNeighborDegree};

/// Per-node structural features, each column min-max normalized to [0,1]
/// (constant columns become all-zero). Requires n >= 2.
NodeFeatures node_features(const Graph& g,
                           std::span<const NodeFeature> features = kDefaultFeatures);

}  // namespace alge
