#include "alge/rankers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace alge {

RankTable rank_from_scores(std::vector<double> scores, std::string method) {
    const NodeId n = static_cast<NodeId>(scores.size());
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    RankTable t;
    t.method = std::move(method);
    t.score = std::move(scores);
    t.rank.resize(n);
    for (NodeId i = 0; i < n; ++i) t.rank[order[i]] = i + 1;
    return t;
}

RankTable rank_degree(const Graph& g) {
    std::vector<double> s(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) s[v] = g.degree(v);
    return rank_from_scores(std::move(s), "degree");
}

RankTable rank_kshell(const Graph& g) {
    auto core = core_numbers(g);
    std::vector<double> s(core.begin(), core.end());
    return rank_from_scores(std::move(s), "kshell");
}

RankTable rank_hindex(const Graph& g) {
    std::vector<double> s(g.num_nodes());
    std::vector<NodeId> degs;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        degs.clear();
        for (NodeId u : g.neighbors(v)) degs.push_back(g.degree(u));
        std::sort(degs.begin(), degs.end(), std::greater<>());
        int h = 0;
        while (h < static_cast<int>(degs.size()) && degs[h] >= h + 1) ++h;
        s[v] = h;
    }
    return rank_from_scores(std::move(s), "hindex");
}

RankTable rank_ci(const Graph& g, int ell) {
    if (ell < 1) throw std::invalid_argument("rank_ci requires ell >= 1");
    const NodeId n = g.num_nodes();
    std::vector<double> s(n, 0.0);
    std::vector<int> dist(n);
    std::vector<NodeId> frontier, next;
    for (NodeId v = 0; v < n; ++v) {
        if (g.degree(v) <= 1) continue;  // factor k_i - 1 vanishes
        std::fill(dist.begin(), dist.end(), -1);
        dist[v] = 0;
        frontier.assign(1, v);
        for (int d = 0; d < ell && !frontier.empty(); ++d) {
            next.clear();
            for (NodeId u : frontier)
                for (NodeId w : g.neighbors(u))
                    if (dist[w] < 0) {
                        dist[w] = d + 1;
                        next.push_back(w);
                    }
            frontier.swap(next);
        }
        double frontier_sum = 0.0;  // frontier now holds nodes at distance exactly ell
        for (NodeId u : frontier) frontier_sum += g.degree(u) - 1;
        s[v] = (g.degree(v) - 1) * frontier_sum;
    }
    return rank_from_scores(std::move(s), "ci");
}

}  // namespace alge
