#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alge/error.hpp"
#include "alge/graph.hpp"
#include "alge/predictor.hpp"
#include "alge/rng.hpp"

using namespace alge;

namespace {

GatDims tiny_dims() {
    GatDims d;
    d.input_dim = 3;
    d.attention_layers = 2;
    d.heads = 2;
    d.units = 3;
    d.head_hidden = 4;
    return d;
}

NodeFeatures random_features(NodeId n, int dim, SplitMix64& rng) {
    NodeFeatures x;
    x.n = n;
    x.dim = dim;
    x.data.resize(static_cast<std::size_t>(n) * dim);
    for (double& v : x.data) v = rng.next_double();
    return x;
}

Graph connected_er(NodeId n, std::int64_t m, std::uint64_t seed) {
    for (std::uint64_t s = seed;; ++s) {
        Graph g = generate_er(n, m, s);
        if (bfs_order(g, 0).size() == static_cast<std::size_t>(n)) return g;
    }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

TEST_CASE("forward handles a single-node graph (softmax over one element)") {
    Graph g = Graph::from_edges(1, {});
    PredictorParams p = PredictorParams::init(tiny_dims(), 1);
    NodeFeatures x;
    x.n = 1;
    x.dim = 3;
    x.data = {0.2, 0.4, 0.6};
    auto y = forward(p, g, x);
    CHECK(y.size() == 1);
    CHECK(std::isfinite(y[0]));
    CHECK(y[0] > 0.0);
    CHECK(y[0] < 1.0);
}

TEST_CASE("zero attention vector averages the projected neighborhood") {
    // 1 layer, 1 head, 1 unit, identity projections: the attention output of
    // node i must be the plain mean of x over {i} union N(i)
    GatDims d;
    d.input_dim = 1;
    d.attention_layers = 1;
    d.heads = 1;
    d.units = 1;
    d.head_hidden = 1;
    PredictorParams p = PredictorParams::init(d, 1);
    auto& head = p.layers[0].heads[0];
    head.w_src.at(0, 0) = 1.0;
    head.w_dst.at(0, 0) = 1.0;
    head.attn[0] = 0.0;
    p.head_w1.at(0, 0) = 1.0;
    p.head_b1[0] = 0.0;
    p.head_w2.at(0, 0) = 1.0;
    p.head_b2[0] = 0.0;

    Graph path = load_edge_list("0 1\n1 2");
    NodeFeatures x;
    x.n = 3;
    x.dim = 1;
    x.data = {0.0, 1.0, 0.0};
    auto y = forward(p, path, x);
    CHECK(y[0] == doctest::Approx(sigmoid(0.5)).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(sigmoid(1.0 / 3.0)).epsilon(1e-12));
    CHECK(y[2] == y[0]);
}

TEST_CASE("forward is permutation-equivariant") {
    SplitMix64 rng(1234);
    for (int rep = 0; rep < 5; ++rep) {
        Graph g = generate_ba(12, 2, rng.next());
        GatDims d = tiny_dims();
        PredictorParams p = PredictorParams::init(d, rng.next());
        NodeFeatures x = random_features(g.num_nodes(), d.input_dim, rng);

        std::vector<NodeId> perm(g.num_nodes());
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_index(static_cast<std::uint64_t>(i) + 1)]);
        std::vector<Edge> redges;
        for (auto [u, v] : g.edges()) redges.emplace_back(perm[u], perm[v]);
        Graph h = Graph::from_edges(g.num_nodes(), std::move(redges));
        NodeFeatures xp = x;
        for (NodeId v = 0; v < g.num_nodes(); ++v)
            for (int k = 0; k < d.input_dim; ++k)
                xp.data[static_cast<std::size_t>(perm[v]) * d.input_dim + k] = x.at(v, k);

        auto y = forward(p, g, x);
        auto yp = forward(p, h, xp);
        for (NodeId v = 0; v < g.num_nodes(); ++v)
            CHECK(std::abs(y[v] - yp[perm[v]]) < 1e-10);
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    SplitMix64 rng(777);
    const double step = 1e-5;
    for (int draw = 0; draw < 20; ++draw) {
        Graph g = connected_er(6, 8, rng.next());
        GatDims d = tiny_dims();
        PredictorParams p = PredictorParams::init(d, rng.next());
        NodeFeatures x = random_features(g.num_nodes(), d.input_dim, rng);
        std::vector<LabeledNode> batch;
        for (NodeId v = 0; v < g.num_nodes(); v += 2)
            batch.push_back({v, 0.05 + 0.9 * rng.next_double()});

        auto [loss, grads] = loss_and_gradients(p, g, x, batch);
        CHECK(std::isfinite(loss));
        auto pview = p.flat();
        auto gview = static_cast<const PredictorParams&>(grads).flat();
        REQUIRE(pview.size() == gview.size());
        for (std::size_t i = 0; i < pview.size(); ++i) {
            const double saved = *pview[i];
            *pview[i] = saved + step;
            const double up = loss_and_gradients(p, g, x, batch).first;
            *pview[i] = saved - step;
            const double dn = loss_and_gradients(p, g, x, batch).first;
            *pview[i] = saved;
            const double fd = (up - dn) / (2 * step);
            const double an = *gview[i];
            const double rel = std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
            CHECK(rel < 1e-4);
        }
    }
}

TEST_CASE("loss is zero with perfect predictions and stable under duplication") {
    SplitMix64 rng(9);
    Graph g = generate_ba(10, 2, 3);
    GatDims d = tiny_dims();
    PredictorParams p = PredictorParams::init(d, 5);
    NodeFeatures x = random_features(g.num_nodes(), d.input_dim, rng);
    auto y = forward(p, g, x);

    std::vector<LabeledNode> batch{{0, y[0]}, {4, y[4]}};
    auto [loss, grads] = loss_and_gradients(p, g, x, batch);
    CHECK(loss == 0.0);
    auto gv = static_cast<const PredictorParams&>(grads).flat();
    for (const double* gp : gv) CHECK(*gp == 0.0);

    std::vector<LabeledNode> batch2{{0, 0.3}, {4, 0.6}};
    auto [l1, g1] = loss_and_gradients(p, g, x, batch2);
    std::vector<LabeledNode> doubled{{0, 0.3}, {4, 0.6}, {0, 0.3}, {4, 0.6}};
    auto [l2, g2] = loss_and_gradients(p, g, x, doubled);
    CHECK(l1 == doctest::Approx(l2).epsilon(1e-15));
    auto v1 = static_cast<const PredictorParams&>(g1).flat();
    auto v2 = static_cast<const PredictorParams&>(g2).flat();
    for (std::size_t i = 0; i < v1.size(); ++i)
        CHECK(*v1[i] == doctest::Approx(*v2[i]).epsilon(1e-12));
}

TEST_CASE("pretrain fits simple corpora and is deterministic") {
    SplitMix64 rng(21);
    Graph g = generate_ba(24, 2, 7);
    GatDims d = tiny_dims();
    NodeFeatures x = node_features(g, {kDefaultFeatures, 3});

    // constant-target corpus
    TrainGraph tg;
    tg.graph = &g;
    tg.features = x;
    for (NodeId v = 0; v < g.num_nodes(); ++v) tg.labels.push_back({v, 0.3});

    TrainConfig cfg;
    cfg.learning_rate = 1e-2;
    cfg.epochs = 0;
    PredictorParams initial = pretrain({&tg, 1}, d, cfg);
    const double mse0 = loss_and_gradients(initial, g, x, tg.labels).first;
    cfg.epochs = 200;
    PredictorParams fitted = pretrain({&tg, 1}, d, cfg);
    const double mse1 = loss_and_gradients(fitted, g, x, tg.labels).first;
    CHECK(mse1 < mse0 / 10);

    // single-sample overfit
    TrainGraph one;
    one.graph = &g;
    one.features = x;
    one.labels = {{3, 0.42}};
    cfg.epochs = 200;
    PredictorParams over = pretrain({&one, 1}, d, cfg);
    CHECK(loss_and_gradients(over, g, x, one.labels).first < 1e-4);

    // determinism
    PredictorParams again = pretrain({&one, 1}, d, cfg);
    auto a = static_cast<const PredictorParams&>(over).flat();
    auto b = static_cast<const PredictorParams&>(again).flat();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i] == *b[i]);
}

TEST_CASE("finetune edge cases") {
    Graph g = generate_ba(16, 2, 2);
    GatDims d = tiny_dims();
    NodeFeatures x = node_features(g, {kDefaultFeatures, 3});
    PredictorParams base = PredictorParams::init(d, 77);

    TrainGraph tg;
    tg.graph = &g;
    tg.features = x;
    auto y = forward(base, g, x);
    for (NodeId v = 0; v < 6; ++v) tg.labels.push_back({v, y[v]});

    TrainConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.epochs = 0;
    auto same = finetune(base, tg, cfg);  // zero epochs: identity
    auto va = static_cast<const PredictorParams&>(base).flat();
    auto vb = static_cast<const PredictorParams&>(same).flat();
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(*va[i] == *vb[i]);

    cfg.epochs = 25;
    auto fixed = finetune(base, tg, cfg);  // labels equal predictions: zero gradients
    auto vc = static_cast<const PredictorParams&>(fixed).flat();
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(*va[i] == *vc[i]);

    tg.labels[0].target = 0.9;  // nonzero gradient now, but lr = 0 is the identity
    cfg.learning_rate = 0.0;
    auto frozen = finetune(base, tg, cfg);
    auto vd = static_cast<const PredictorParams&>(frozen).flat();
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(*va[i] == *vd[i]);
}

TEST_CASE("predict_influence clamps into [1, n] and respects isomorphism") {
    Graph g = generate_ba(18, 2, 4);
    GatDims d = tiny_dims();
    NodeFeatures x = node_features(g, {kDefaultFeatures, 3});
    PredictorParams p = PredictorParams::init(d, 123);
    auto table = predict_influence(p, g, x, 0.2);
    CHECK(table.provenance == Provenance::Predicted);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        CHECK(table.value(v) >= 1.0);
        CHECK(table.value(v) <= g.num_nodes());
    }

    // isomorphic copy yields the same multiset of predictions
    SplitMix64 rng(55);
    std::vector<NodeId> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_index(static_cast<std::uint64_t>(i) + 1)]);
    std::vector<Edge> redges;
    for (auto [u, v] : g.edges()) redges.emplace_back(perm[u], perm[v]);
    Graph h = Graph::from_edges(g.num_nodes(), std::move(redges));
    auto th = predict_influence(p, h, node_features(h, {kDefaultFeatures, 3}), 0.2);

    std::vector<double> a, b;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        a.push_back(table.value(v));
        b.push_back(th.value(v));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("training rejects bad inputs") {
    GatDims d = tiny_dims();
    TrainConfig cfg;
    CHECK_THROWS_AS(pretrain({}, d, cfg), std::invalid_argument);

    Graph g = generate_ba(8, 2, 1);
    TrainGraph empty;
    empty.graph = &g;
    empty.features = node_features(g, {kDefaultFeatures, 3});
    CHECK_THROWS_AS(pretrain({&empty, 1}, d, cfg), std::invalid_argument);

    cfg.learning_rate = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
