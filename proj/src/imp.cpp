#include "alge/imp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alge/error.hpp"

namespace alge {

namespace {

std::vector<NodeId> range_for(const Graph& g, NodeId v, double influence) {
    auto order = bfs_order(g, v);
    const std::size_t len = std::min<std::size_t>(
        order.size(), static_cast<std::size_t>(std::max(1.0, std::ceil(influence))));
    order.resize(len);
    return order;
}

}  // namespace

std::vector<std::vector<NodeId>> influence_ranges(const Graph& g, const InfluenceTable& inf) {
    if (!inf.complete() || inf.num_nodes() != g.num_nodes())
        throw DataError("influence_ranges requires a complete influence table");
    std::vector<std::vector<NodeId>> ranges(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) ranges[v] = range_for(g, v, inf.value(v));
    return ranges;
}

SeedSelection select_seeds(const Graph& g, const InfluenceTable& inf, int k) {
    const NodeId n = g.num_nodes();
    if (k < 1 || k > n) throw std::invalid_argument("seed budget K must be in [1, n]");

    auto ranges = influence_ranges(g, inf);
    std::vector<char> covered(n, 0);
    std::vector<std::int64_t> residual(n);
    for (NodeId v = 0; v < n; ++v) residual[v] = static_cast<std::int64_t>(ranges[v].size());

    SeedSelection sel;
    sel.budget = k;
    NodeId covered_count = 0;
    while (static_cast<int>(sel.seeds.size()) < k && covered_count < n) {
        NodeId best = 0;
        for (NodeId v = 1; v < n; ++v)
            if (residual[v] > residual[best]) best = v;

        // covered nodes were already subtracted lazily below, so residual is exact
        std::vector<NodeId>& range = ranges[best];
        sel.seeds.push_back(best);
        sel.residual.push_back(residual[best]);
        sel.covered.push_back(range);
        for (NodeId u : range) covered[u] = 1;
        covered_count += static_cast<NodeId>(range.size());
        range.clear();
        residual[best] = 0;

        for (NodeId v = 0; v < n; ++v) {
            if (v == best || ranges[v].empty()) continue;
            std::erase_if(ranges[v], [&](NodeId u) { return covered[u]; });
            residual[v] = static_cast<std::int64_t>(ranges[v].size());
        }
    }
    sel.covered_all = covered_count >= n;
    for (NodeId v = 0; v < n; ++v)
        if (covered[v]) sel.covered_union.push_back(v);
    return sel;
}

OverlapReport overlap_report(const Graph& g, std::span<const NodeId> seeds,
                             const InfluenceTable& true_influence,
                             const MultiSeedOutcome& outcome) {
    if (outcome.seeds.size() != seeds.size() ||
        !std::equal(seeds.begin(), seeds.end(), outcome.seeds.begin()))
        throw DataError("multi-seed outcome does not match the seed list");
    if (outcome.attributed.size() != seeds.size())
        throw DataError("multi-seed outcome lacks attribution data");

    OverlapReport rep;
    rep.seeds.assign(seeds.begin(), seeds.end());

    std::vector<std::vector<NodeId>> child_sets;
    for (NodeId s : seeds) {
        if (!true_influence.has(s)) throw DataError("true influence missing for a seed");
        auto c = range_for(g, s, true_influence.value(s));
        std::sort(c.begin(), c.end());
        child_sets.push_back(std::move(c));
    }

    std::vector<int> membership(g.num_nodes(), 0);  // how many child sets contain the node
    for (const auto& c : child_sets)
        for (NodeId u : c) ++membership[u];

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::int64_t overlap = 0;
        for (NodeId u : child_sets[i])
            if (membership[u] > 1) ++overlap;  // u also lies in some other C_j
        const double ind = true_influence.value(seeds[i]);
        const double attr = outcome.attributed[i];
        rep.overlap.push_back(overlap);
        rep.individual.push_back(ind);
        rep.attributed.push_back(attr);
        rep.decrease.push_back(std::max(0.0, ind - attr));
    }
    return rep;
}

}  // namespace alge
