#pragma once

#include <span>
#include <string>
#include <vector>

#include "alge/rankers.hpp"
#include "alge/sir.hpp"

namespace alge {

/// Kendall's tau = 2(n+ - n-) / (N(N-1)) for two rank permutations of 1..N.
/// Exact pair counts via inversion counting; requires N >= 2.
double kendall_tau(std::span<const int> true_rank, std::span<const int> predicted_rank);

/// Per-node disputation: mean absolute rank error of a panel of algorithms
/// against the true rank, optionally excluding the single worst error.
struct DisputationTable {
    std::vector<std::string> methods;
    std::vector<int> true_rank;                 // per node
    std::vector<std::vector<int>> panel_ranks;  // [node][method]
    std::vector<double> disputation;            // D_i per node
    NodeId num_nodes() const { return static_cast<NodeId>(disputation.size()); }
};

/// exclude_worst drops exactly one maximal |r_ij - r_i0| per node (ties: the
/// earliest algorithm in panel order) and divides by m-1. Requires at least
/// two algorithms when exclude_worst is set, at least one otherwise.
DisputationTable disputation(std::span<const RankTable> panel, const RankTable& truth,
                             bool exclude_worst);

/// Mean squared error over all nodes; tables must cover the same node set.
double mse(const InfluenceTable& predicted, const InfluenceTable& truth);

/// Mean squared error restricted to a node subset.
double mse_on(const InfluenceTable& predicted, const InfluenceTable& truth,
              std::span<const NodeId> nodes);

/// Cumulative infected-or-recovered fraction per step.
std::vector<double> infected_ratio_curve(const MultiSeedOutcome& outcome, NodeId n);

}  // namespace alge
