#pragma once

#include <span>
#include <vector>

#include "alge/graph.hpp"
#include "alge/sir.hpp"

namespace alge {

/// Per-node influence range: the first ceil(I_v) nodes of bfs_order(g, v),
/// capped at the component size. v itself is always range[v][0].
std::vector<std::vector<NodeId>> influence_ranges(const Graph& g, const InfluenceTable& inf);

/// Greedy seed selection with overlap deduction by set subtraction.
struct SeedSelection {
    std::vector<NodeId> seeds;                  // selection order
    std::vector<std::int64_t> residual;         // residual influence at selection time
    std::vector<std::vector<NodeId>> covered;   // newly covered nodes per seed (disjoint)
    std::vector<NodeId> covered_union;          // ascending
    int budget = 0;
    bool covered_all = false;  // stopped early because every node was covered
};

/// Iteratively picks the node whose residual range (range minus covered
/// nodes) is largest (ties: ascending id), marks that residual range covered,
/// and subtracts it from every other range. Stops at K seeds or full
/// coverage. Requires 1 <= K <= n and a complete influence table.
SeedSelection select_seeds(const Graph& g, const InfluenceTable& inf, int k);

/// Overlap and influence-decrease diagnostics for a seed set.
struct OverlapReport {
    std::vector<NodeId> seeds;
    std::vector<std::int64_t> overlap;       // O_i = |C_i inter union_{j!=i} C_j|
    std::vector<double> individual;          // I_i, true individual influence
    std::vector<double> attributed;          // IN_i, mean attributed infected count
    std::vector<double> decrease;            // ID_i = max(0, I_i - IN_i)
};

/// C_i are BFS influence ranges built from the true individual influence
/// values; IN_i comes from the multi-seed outcome (must match the seed list).
OverlapReport overlap_report(const Graph& g, std::span<const NodeId> seeds,
                             const InfluenceTable& true_influence,
                             const MultiSeedOutcome& outcome);

}  // namespace alge
