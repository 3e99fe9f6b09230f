#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "alge/graph.hpp"
#include "alge/rankers.hpp"
#include "alge/rng.hpp"

using namespace alge;

namespace {

// literal definitions, independent of the library implementations
std::vector<double> degree_oracle(const Graph& g) {
    std::vector<double> s(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) s[v] = g.neighbors(v).size();
    return s;
}

std::vector<double> hindex_oracle(const Graph& g) {
    std::vector<double> s(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        int best = 0;
        for (int h = 0; h <= g.num_nodes(); ++h) {
            int count = 0;
            for (NodeId u : g.neighbors(v))
                if (g.degree(u) >= h) ++count;
            if (count >= h) best = h;
        }
        s[v] = best;
    }
    return s;
}

std::vector<double> kshell_oracle(const Graph& g) {
    // peel by definition
    const NodeId n = g.num_nodes();
    std::vector<double> s(n, 0.0);
    for (NodeId k = 1; k <= n; ++k) {
        std::vector<char> alive(n, 1);
        bool changed = true;
        while (changed) {
            changed = false;
            for (NodeId v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                NodeId d = 0;
                for (NodeId u : g.neighbors(v)) d += alive[u];
                if (d < k) {
                    alive[v] = 0;
                    changed = true;
                }
            }
        }
        for (NodeId v = 0; v < n; ++v)
            if (alive[v]) s[v] = k;
    }
    return s;
}

std::vector<double> ci_oracle(const Graph& g, int ell) {
    std::vector<double> s(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        auto dist = bfs_distances(g, v);
        double frontier = 0.0;
        for (NodeId u = 0; u < g.num_nodes(); ++u)
            if (dist[u] == ell) frontier += g.degree(u) - 1;
        s[v] = (g.degree(v) - 1.0) * frontier;
    }
    return s;
}

void check_rank_permutation(const RankTable& t) {
    std::vector<int> sorted = t.rank;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) CHECK(sorted[i] == i + 1);
    for (NodeId a = 0; a < t.num_nodes(); ++a)
        for (NodeId b = a + 1; b < t.num_nodes(); ++b)
            if (t.score[a] > t.score[b]) CHECK(t.rank[a] < t.rank[b]);
}

}  // namespace

TEST_CASE("rank_degree examples") {
    Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4");
    CHECK(rank_degree(star).rank[0] == 1);

    Graph cycle = load_edge_list("0 1\n1 2\n2 3\n3 0");
    auto t = rank_degree(cycle);
    for (NodeId v = 0; v < 4; ++v) CHECK(t.rank[v] == v + 1);  // id tie-break

    Graph path = load_edge_list("0 1\n1 2");
    CHECK(rank_degree(path).rank[1] == 1);
}

TEST_CASE("rank_kshell examples") {
    Graph k4p = load_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 4");
    auto t = rank_kshell(k4p);
    CHECK(t.rank[4] == 5);  // pendant last

    Graph tree = generate_ba(12, 1, 3);
    auto tt = rank_kshell(tree);
    for (NodeId v = 0; v < 12; ++v) CHECK(tt.score[v] == 1.0);

    // triangle with one pendant per vertex
    Graph trip = load_edge_list("0 1\n1 2\n2 0\n0 3\n1 4\n2 5");
    auto tr = rank_kshell(trip);
    for (NodeId v = 0; v < 3; ++v) CHECK(tr.rank[v] <= 3);
}

TEST_CASE("rank_hindex examples") {
    Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4\n0 5");
    CHECK(rank_hindex(star).score[0] == 1.0);

    Graph k4 = generate_er(4, 6, 1);
    CHECK(rank_hindex(k4).score[0] == 3.0);

    Graph edge = Graph::from_edges(2, {{0, 1}});
    CHECK(rank_hindex(edge).score[0] == 1.0);
}

TEST_CASE("rank_ci examples") {
    Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4");
    CHECK(rank_ci(star, 1).score[0] == 0.0);

    Graph path5 = load_edge_list("0 1\n1 2\n2 3\n3 4");
    CHECK(rank_ci(path5, 1).score[2] == 2.0);

    CHECK(rank_ci(path5, 1).score[0] == 0.0);  // degree-1 node

    // frontier empty for every node once ell exceeds the diameter
    auto far = rank_ci(path5, 10);
    for (NodeId v = 0; v < 5; ++v) CHECK(far.score[v] == 0.0);
}

TEST_CASE("rankers match brute-force definitions on random graphs") {
    SplitMix64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        NodeId n = 2 + static_cast<NodeId>(rng.uniform_index(9));
        std::int64_t maxm = static_cast<std::int64_t>(n) * (n - 1) / 2;
        Graph g = generate_er(n, static_cast<std::int64_t>(rng.uniform_index(maxm + 1)), rng.next());
        CHECK(rank_degree(g).score == degree_oracle(g));
        CHECK(rank_kshell(g).score == kshell_oracle(g));
        CHECK(rank_hindex(g).score == hindex_oracle(g));
        const int ell = 1 + static_cast<int>(rng.uniform_index(3));
        CHECK(rank_ci(g, ell).score == ci_oracle(g, ell));

        check_rank_permutation(rank_degree(g));
        check_rank_permutation(rank_kshell(g));
        check_rank_permutation(rank_hindex(g));
        check_rank_permutation(rank_ci(g, ell));
    }
}
