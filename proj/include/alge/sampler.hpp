#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alge/graph.hpp"

namespace alge {

/// Dense symmetric matrix of normalized relative-entropy similarities.
/// s_ij in [0,1] off-diagonal, 1 on the diagonal; larger means more similar.
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    explicit CorrelationMatrix(NodeId n) : n_(n), s_(static_cast<std::size_t>(n) * n, 0.0) {
        for (NodeId i = 0; i < n; ++i) set(i, i, 1.0);
    }
    /// Validates symmetry, range and unit diagonal.
    static CorrelationMatrix from_values(NodeId n, std::vector<double> values);

    NodeId num_nodes() const { return n_; }
    double at(NodeId i, NodeId j) const { return s_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(NodeId i, NodeId j, double v) {
        s_[static_cast<std::size_t>(i) * n_ + j] = v;
        s_[static_cast<std::size_t>(j) * n_ + i] = v;
    }
    const std::vector<double>& values() const { return s_; }

private:
    NodeId n_ = 0;
    std::vector<double> s_;
};

/// Correlation network: edge (i,j) present iff s_ij > threshold, where the
/// threshold is the largest connectivity-preserving value found by bisection.
struct CorrelationNetwork {
    Graph graph;
    double threshold = 0.0;
};

/// Ordered representative nodes with the selection round of each.
struct RepresentativeSet {
    std::vector<NodeId> nodes;
    std::vector<int> round;  // 1-based, aligned with nodes
    bool truncated = false;  // true when a max_labels cap stopped the loop
};

/// Fraction of nodes at each hop distance d = 1..D from node i, where D is
/// the largest distance observed anywhere in the graph. Disconnected graphs
/// are handled per component (denominator |component| - 1, zero-padded).
std::vector<double> shell_distribution(const Graph& g, NodeId i);

/// All shell distributions at once (one BFS per node).
std::vector<std::vector<double>> all_shell_distributions(const Graph& g);

/// KL divergence of the eps-smoothed, renormalized distributions; finite and
/// nonnegative for any nonnegative inputs of equal length.
double relative_entropy(std::span<const double> p, std::span<const double> q, double eps);

/// Builds the normalized correlation matrix: r_ij = RE_ij + RE_ji, then
/// s_ij = 1 - r_ij / max r (max over off-diagonal entries). If every r_ij is
/// zero (structurally identical nodes) all off-diagonals are set to 1.
CorrelationMatrix correlation_matrix(const Graph& g, double eps = 1e-9, int workers = 1);

/// Bisects the edge threshold to the largest value (within tol) at which the
/// network of edges s_ij > t stays connected. Matches the min edge weight of
/// a maximum spanning tree within tol. Throws if disconnected at t = 0.
CorrelationNetwork threshold_by_bisection(const CorrelationMatrix& s, double tol = 1e-6);

/// Greedy selection: repeatedly take the remaining node with maximum
/// remaining degree (ties: ascending id), then remove it and its neighbors.
/// The full output is an independent dominating set of the network;
/// max_labels > 0 stops after that many selections.
RepresentativeSet select_representatives(const CorrelationNetwork& cn, std::size_t max_labels = 0);

}  // namespace alge
