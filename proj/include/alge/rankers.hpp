#pragma once

#include <string>
#include <vector>

#include "alge/graph.hpp"

namespace alge {

/// Per-node rank (1 = highest score) plus the underlying score. Ties are
/// broken by ascending node id, so ranks are always a permutation of 1..n.
struct RankTable {
    std::vector<int> rank;
    std::vector<double> score;
    std::string method;

    NodeId num_nodes() const { return static_cast<NodeId>(rank.size()); }
};

/// Ranks nodes by descending score, ascending id on ties.
RankTable rank_from_scores(std::vector<double> scores, std::string method);

RankTable rank_degree(const Graph& g);
RankTable rank_kshell(const Graph& g);

/// H-index: largest h such that the node has >= h neighbors of degree >= h.
RankTable rank_hindex(const Graph& g);

/// Collective influence CI_l(i) = (k_i - 1) * sum over the distance-l
/// frontier of (k_j - 1). Requires ell >= 1.
RankTable rank_ci(const Graph& g, int ell = 2);

}  // namespace alge
