#include <doctest.h>

#include <cmath>
#include <numeric>

#include "alge/error.hpp"
#include "alge/graph.hpp"
#include "alge/rng.hpp"
#include "alge/sir.hpp"

using namespace alge;

namespace {

Graph k_regular_circulant(NodeId n, int k) {
    std::vector<Edge> edges;
    for (NodeId v = 0; v < n; ++v) {
        for (int off = 1; off <= k / 2; ++off) edges.emplace_back(v, (v + off) % n);
        if (k % 2) edges.emplace_back(v, (v + n / 2) % n);
    }
    return Graph::from_edges(n, std::move(edges));
}

Graph star(NodeId leaves) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, std::move(edges));
}

}  // namespace

TEST_CASE("epidemic_threshold formula") {
    for (int k = 2; k <= 6; ++k) {
        Graph g = k_regular_circulant(12, k);
        CHECK(epidemic_threshold(g) == 1.0 / (k - 1));
    }
    for (NodeId n = 3; n <= 20; ++n) CHECK(epidemic_threshold(star(n)) == 2.0 / (n - 1));

    // perfect matching: <k^2> == <k>
    Graph matching = Graph::from_edges(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(epidemic_threshold(matching), NumericalError);
}

TEST_CASE("simulate_influence degenerate betas are exact") {
    Graph g = generate_ba(30, 2, 5);
    SirConfig cfg;
    cfg.runs = 50;
    cfg.beta = 0.0;
    auto t0 = simulate_influence(g, cfg);
    for (NodeId v = 0; v < g.num_nodes(); ++v) CHECK(t0.value(v) == 1.0);

    cfg.beta = 1.0;
    auto t1 = simulate_influence(g, cfg);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        CHECK(t1.value(v) == static_cast<double>(g.num_nodes()));
}

TEST_CASE("simulate_influence matches closed forms within 3 standard errors") {
    // single edge: influence = 1 + beta, one Bernoulli trial
    Graph edge = Graph::from_edges(2, {{0, 1}});
    const double beta = 0.3;
    const int runs = 10000;
    SirConfig cfg;
    cfg.beta = beta;
    cfg.runs = runs;
    cfg.master_seed = 11;
    auto t = simulate_influence(edge, cfg);
    const double se_edge = 3.0 * std::sqrt(beta * (1 - beta) / runs);
    CHECK(std::abs(t.value(0) - (1 + beta)) < se_edge);

    // star hub with L leaves: influence = 1 + L*beta
    Graph s = star(6);
    auto ts = simulate_influence(s, cfg);
    const double se_star = 3.0 * std::sqrt(6 * beta * (1 - beta) / runs);
    CHECK(std::abs(ts.value(0) - (1 + 6 * beta)) < se_star);
}

TEST_CASE("exact_influence_oracle closed forms") {
    Graph edge = Graph::from_edges(2, {{0, 1}});
    CHECK(exact_influence_oracle(edge, 0, 0.25) == doctest::Approx(1.25).epsilon(1e-12));

    Graph tri = load_edge_list("0 1\n1 2\n2 0");
    CHECK(exact_influence_oracle(tri, 0, 1.0) == doctest::Approx(3.0).epsilon(1e-12));

    Graph path = load_edge_list("0 1\n1 2");
    const double b = 0.4;
    CHECK(exact_influence_oracle(path, 0, b) == doctest::Approx(1 + b + b * b).epsilon(1e-12));

    Graph big = generate_ba(30, 2, 1);
    CHECK_THROWS_AS(exact_influence_oracle(big, 0, 0.5), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with the percolation oracle on small graphs") {
    SplitMix64 rng(2024);
    int checked = 0;
    for (int rep = 0; checked < 12; ++rep) {
        NodeId n = 3 + static_cast<NodeId>(rng.uniform_index(4));  // 3..6
        std::int64_t maxm = static_cast<std::int64_t>(n) * (n - 1) / 2;
        Graph g = generate_er(n, 1 + static_cast<std::int64_t>(rng.uniform_index(maxm)), rng.next());
        if (bfs_order(g, 0).size() != static_cast<std::size_t>(n)) continue;  // want connected
        ++checked;
        const NodeId s = static_cast<NodeId>(rng.uniform_index(n));
        for (double beta : {0.2, 0.5, 0.8}) {
            const double exact = exact_influence_oracle(g, s, beta);
            SirConfig cfg;
            cfg.beta = beta;
            cfg.runs = 10000;
            cfg.master_seed = rng.next();
            const NodeId node[] = {s};
            const double est = simulate_influence(g, cfg, node).value(s);
            // conservative SE bound: outcomes lie in [1, n]
            const double se = (n - 1) / (2.0 * std::sqrt(cfg.runs));
            CHECK(std::abs(est - exact) < 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("parallel determinism: identical tables for 1, 2 and 8 workers") {
    Graph g = generate_ba(60, 3, 9);
    SirConfig cfg;
    cfg.beta = 0.2;
    cfg.runs = 200;
    cfg.master_seed = 77;
    cfg.workers = 1;
    auto t1 = simulate_influence(g, cfg);
    cfg.workers = 2;
    auto t2 = simulate_influence(g, cfg);
    cfg.workers = 8;
    auto t8 = simulate_influence(g, cfg);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        CHECK(t1.value(v) == t2.value(v));
        CHECK(t1.value(v) == t8.value(v));
    }

    auto seeds = std::vector<NodeId>{0, 5, 17};
    cfg.workers = 1;
    auto m1 = simulate_multi_seed(g, seeds, cfg);
    cfg.workers = 8;
    auto m8 = simulate_multi_seed(g, seeds, cfg);
    CHECK(m1.newly_infected_per_step == m8.newly_infected_per_step);
    CHECK(m1.attributed == m8.attributed);
    CHECK(m1.total_recovered_sum == m8.total_recovered_sum);
}

TEST_CASE("monotonicity in beta (statistical)") {
    Graph g = generate_ba(50, 2, 3);
    SirConfig lo, hi;
    lo.beta = 0.2;
    hi.beta = 0.8;
    lo.runs = hi.runs = 2000;
    lo.master_seed = hi.master_seed = 4;
    auto tl = simulate_influence(g, lo);
    auto th = simulate_influence(g, hi);
    for (NodeId v = 0; v < g.num_nodes(); ++v) CHECK(th.value(v) >= tl.value(v));
}

TEST_CASE("multi-seed attribution identities") {
    Graph g = generate_ba(40, 2, 8);
    std::vector<NodeId> seeds{0, 3, 11};
    for (std::uint64_t run = 0; run < 50; ++run) {
        auto r = simulate_multi_seed_run(g, seeds, 0.3, derive_stream(123, run));
        // every recovered node is attributed to exactly one seed
        CHECK(std::accumulate(r.attributed.begin(), r.attributed.end(), std::int64_t{0}) ==
              static_cast<std::int64_t>(r.recovered.size()));
        // newly infected counts sum to the final recovered count
        CHECK(std::accumulate(r.newly_infected.begin(), r.newly_infected.end(), std::int64_t{0}) ==
              static_cast<std::int64_t>(r.recovered.size()));
    }
}

TEST_CASE("multi-seed examples") {
    // all nodes seeded: everything recovers in one step
    Graph g = generate_er(10, 14, 2);
    std::vector<NodeId> all(10);
    std::iota(all.begin(), all.end(), 0);
    SirConfig cfg;
    cfg.beta = 0.5;
    cfg.runs = 20;
    auto out = simulate_multi_seed(g, all, cfg);
    CHECK(out.mean_final_recovered == 10.0);
    CHECK(out.newly_infected_per_step.size() == 1);

    // seeds in separate components never cross-attribute
    Graph two = Graph::from_edges(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
    std::vector<NodeId> seeds{0, 3};
    cfg.beta = 1.0;
    cfg.runs = 10;
    auto o2 = simulate_multi_seed(two, seeds, cfg);
    CHECK(o2.attributed[0] == 3.0);
    CHECK(o2.attributed[1] == 3.0);

    // symmetric simultaneous infection splits attribution about evenly
    Graph path = load_edge_list("0 1\n1 2");
    std::vector<NodeId> ends{0, 2};
    cfg.beta = 1.0;
    cfg.runs = 4000;
    cfg.master_seed = 5;
    auto o3 = simulate_multi_seed(path, ends, cfg);
    const double sigma = std::sqrt(0.25 / cfg.runs);
    CHECK(std::abs(o3.attributed[0] - 1.5) < 3 * sigma + 1e-12);
    CHECK(o3.attributed[0] + o3.attributed[1] == 3.0);
}

TEST_CASE("config validation") {
    SirConfig cfg;
    cfg.beta = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.beta = 0.5;
    cfg.mu = 0.7;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.mu = 1.0;
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    Graph g = Graph::from_edges(2, {{0, 1}});
    SirConfig ok;
    ok.beta = 0.5;
    ok.runs = 3;
    CHECK(simulate_influence(g, ok, std::vector<NodeId>{}).present_nodes().empty());
}
