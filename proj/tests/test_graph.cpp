#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "alge/error.hpp"
#include "alge/graph.hpp"
#include "alge/io.hpp"
#include "alge/rng.hpp"

using namespace alge;

namespace {

// literal peeling by definition: core(v) = max k such that v survives
// repeated deletion of nodes with degree < k
std::vector<NodeId> core_oracle(const Graph& g) {
    const NodeId n = g.num_nodes();
    std::vector<NodeId> core(n, 0);
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
            if (alive[v]) core[v] = k;
    }
    return core;
}

void check_simple_symmetric(const Graph& g) {
    std::set<std::pair<NodeId, NodeId>> seen;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        auto nb = g.neighbors(v);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (std::size_t i = 1; i < nb.size(); ++i) CHECK(nb[i] != nb[i - 1]);
        for (NodeId u : nb) {
            CHECK(u != v);
            auto back = g.neighbors(u);
            CHECK(std::binary_search(back.begin(), back.end(), v));
            seen.insert({std::min(u, v), std::max(u, v)});
        }
    }
    CHECK(static_cast<std::int64_t>(seen.size()) == g.num_edges());
}

}  // namespace

TEST_CASE("load_edge_list parses, dedupes and remaps") {
    Graph tri = load_edge_list("0 1\n1 2\n2 0");
    CHECK(tri.num_nodes() == 3);
    CHECK(tri.num_edges() == 3);

    Graph pair = load_edge_list("5 9\n9 5\n5 5");
    CHECK(pair.num_nodes() == 2);
    CHECK(pair.num_edges() == 1);
    CHECK(pair.has_edge(0, 1));  // 5 -> 0, 9 -> 1 by first appearance

    Graph path = load_edge_list("0 1\n1 2\n#c\n2 3");
    CHECK(path.num_nodes() == 4);
    CHECK(path.num_edges() == 3);
    CHECK(path.degree(0) == 1);

    Graph crlf = load_edge_list("0 1\r\n1 2\r\n");
    CHECK(crlf.num_edges() == 2);
}

TEST_CASE("load_edge_list rejects malformed input") {
    CHECK_THROWS_AS(load_edge_list(""), DataError);
    CHECK_THROWS_AS(load_edge_list("# only comments\n"), DataError);
    CHECK_THROWS_AS(load_edge_list("0 x\n"), ParseError);
    CHECK_THROWS_AS(load_edge_list("0\n"), ParseError);
    CHECK_THROWS_AS(load_edge_list("0 1 2\n"), ParseError);
    try {
        load_edge_list("0 1\nbad line\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("generate_ba follows the documented attachment convention") {
    Graph tree = generate_ba(5, 1, 42);
    CHECK(tree.num_nodes() == 5);
    CHECK(tree.num_edges() == 4);

    // clique on m+1 = 4 nodes (6 edges) plus m = 3 edges per later node
    Graph g = generate_ba(200, 3, 7);
    CHECK(g.num_edges() == 6 + 3 * (200 - 4));
    CHECK(g.num_edges() == 594);
    check_simple_symmetric(g);

    std::ostringstream a, b;
    write_edge_list(a, generate_ba(200, 3, 7));
    write_edge_list(b, generate_ba(200, 3, 7));
    CHECK(a.str() == b.str());
    CHECK_THROWS_AS(generate_ba(3, 3, 1), std::invalid_argument);
}

TEST_CASE("generate_er hits the exact edge count") {
    Graph k4 = generate_er(4, 6, 1);
    CHECK(k4.num_edges() == 6);
    for (NodeId v = 0; v < 4; ++v) CHECK(k4.degree(v) == 3);

    CHECK(generate_er(10, 0, 1).num_edges() == 0);
    CHECK_THROWS_AS(generate_er(4, 7, 1), std::invalid_argument);

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Graph g = generate_er(30, 120, seed);
        CHECK(g.num_edges() == 120);
        check_simple_symmetric(g);
        std::ostringstream a, b;
        write_edge_list(a, g);
        write_edge_list(b, generate_er(30, 120, seed));
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("bfs_order: level order with id tie-break") {
    Graph path = load_edge_list("0 1\n1 2");
    CHECK(bfs_order(path, 1) == std::vector<NodeId>{1, 0, 2});

    Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4");
    CHECK(bfs_order(star, 0) == std::vector<NodeId>{0, 1, 2, 3, 4});

    Graph two = Graph::from_edges(3, {{0, 1}});
    CHECK(bfs_order(two, 0) == std::vector<NodeId>{0, 1});
}

TEST_CASE("bfs_order visits each reachable node once, distances nondecreasing") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = generate_er(40, 60, seed);
        auto order = bfs_order(g, 0);
        auto dist = bfs_distances(g, 0);
        std::set<NodeId> seen;
        int last = 0;
        for (NodeId v : order) {
            CHECK(seen.insert(v).second);
            CHECK(dist[v] >= last);
            last = dist[v];
        }
        for (NodeId v = 0; v < g.num_nodes(); ++v)
            CHECK((dist[v] >= 0) == seen.count(v));
    }
}

TEST_CASE("core_numbers matches examples and the peeling oracle") {
    CHECK(core_numbers(load_edge_list("0 1\n1 2\n2 0")) == std::vector<NodeId>{2, 2, 2});
    CHECK(core_numbers(load_edge_list("0 1\n1 2\n2 3")) == std::vector<NodeId>{1, 1, 1, 1});

    Graph k4p = load_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 4");
    CHECK(core_numbers(k4p) == std::vector<NodeId>{3, 3, 3, 3, 1});

    SplitMix64 rng(99);
    for (int rep = 0; rep < 30; ++rep) {
        NodeId n = 2 + static_cast<NodeId>(rng.uniform_index(7));
        std::int64_t maxm = static_cast<std::int64_t>(n) * (n - 1) / 2;
        Graph g = generate_er(n, static_cast<std::int64_t>(rng.uniform_index(maxm + 1)), rng.next());
        CHECK(core_numbers(g) == core_oracle(g));
    }
}

TEST_CASE("degree_stats is exact") {
    Graph cycle = load_edge_list("0 1\n1 2\n2 3\n3 0");
    auto [k, k2] = degree_stats(cycle);
    CHECK(k == 2.0);
    CHECK(k2 == 4.0);

    Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4");
    auto s = degree_stats(star);
    CHECK(s.mean == doctest::Approx(8.0 / 5).epsilon(1e-15));
    CHECK(s.mean_sq == 4.0);

    auto single = degree_stats(Graph::from_edges(1, {}));
    CHECK(single.mean == 0.0);
    CHECK(single.mean_sq == 0.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = generate_er(25, 3 * 25, seed);
        auto st = degree_stats(g);
        CHECK(st.mean * g.num_nodes() == 2.0 * static_cast<double>(g.num_edges()));
    }
}

TEST_CASE("node_features: min-max normalization per column") {
    Graph cycle = load_edge_list("0 1\n1 2\n2 3\n3 0");
    auto f = node_features(cycle);
    for (NodeId v = 0; v < 4; ++v) CHECK(f.at(v, 0) == 0.0);  // constant degree column

    Graph star = load_edge_list("0 1\n0 2\n0 3\n0 4");
    auto fs = node_features(star);
    CHECK(fs.at(0, 0) == 1.0);
    for (NodeId v = 1; v < 5; ++v) CHECK(fs.at(v, 0) == 0.0);

    Graph tri = load_edge_list("0 1\n1 2\n2 0");
    auto ft = node_features(tri);
    for (NodeId v = 0; v < 3; ++v) CHECK(ft.at(v, 2) == 0.0);  // clustering constant 1.0

    for (double x : fs.data) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    CHECK_THROWS_AS(node_features(Graph::from_edges(1, {})), std::invalid_argument);

    const NodeFeature two[] = {NodeFeature::Degree, NodeFeature::Clustering};
    CHECK(node_features(star, two).dim == 2);
}
