#include "alge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "alge/error.hpp"

namespace alge {

namespace {

struct ShellContext {
    std::vector<NodeId> comp;        // component label per node
    std::vector<NodeId> comp_size;   // size per label
    int max_dist = 0;
};

ShellContext shell_context(const Graph& g) {
    ShellContext ctx;
    ctx.comp = component_ids(g);
    NodeId labels = ctx.comp.empty() ? 0 : *std::max_element(ctx.comp.begin(), ctx.comp.end()) + 1;
    ctx.comp_size.assign(labels, 0);
    for (NodeId v : ctx.comp) ++ctx.comp_size[v];
    return ctx;
}

std::vector<double> shell_from_bfs(const Graph& g, NodeId i, const ShellContext& ctx,
                                   int max_dist) {
    std::vector<double> p(max_dist, 0.0);
    const NodeId others = ctx.comp_size[ctx.comp[i]] - 1;
    if (others <= 0) return p;  // singleton component: zero vector, smoothing makes it uniform
    auto dist = bfs_distances(g, i);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (dist[v] > 0) p[dist[v] - 1] += 1.0;
    for (double& x : p) x /= others;
    return p;
}

}  // namespace

CorrelationMatrix CorrelationMatrix::from_values(NodeId n, std::vector<double> values) {
    if (static_cast<std::size_t>(n) * n != values.size())
        throw std::invalid_argument("correlation matrix: size mismatch");
    CorrelationMatrix m;
    m.n_ = n;
    m.s_ = std::move(values);
    for (NodeId i = 0; i < n; ++i) {
        if (m.at(i, i) != 1.0) throw DataError("correlation matrix: diagonal must be 1");
        for (NodeId j = i + 1; j < n; ++j) {
            if (m.at(i, j) != m.at(j, i)) throw DataError("correlation matrix: not symmetric");
            if (!(m.at(i, j) >= 0.0 && m.at(i, j) <= 1.0))
                throw DataError("correlation matrix: entry outside [0,1]");
        }
    }
    return m;
}

std::vector<double> shell_distribution(const Graph& g, NodeId i) {
    if (g.num_nodes() < 2) throw std::invalid_argument("shell_distribution requires n >= 2");
    if (i < 0 || i >= g.num_nodes()) throw std::invalid_argument("node out of range");
    ShellContext ctx = shell_context(g);
    int max_dist = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        auto dist = bfs_distances(g, v);
        for (int d : dist) max_dist = std::max(max_dist, d);
    }
    return shell_from_bfs(g, i, ctx, max_dist);
}

std::vector<std::vector<double>> all_shell_distributions(const Graph& g) {
    if (g.num_nodes() < 2) throw std::invalid_argument("shell distributions require n >= 2");
    const NodeId n = g.num_nodes();
    ShellContext ctx = shell_context(g);

    std::vector<std::vector<int>> hist(n);
    int max_dist = 0;
    for (NodeId v = 0; v < n; ++v) {
        auto dist = bfs_distances(g, v);
        int ecc = 0;
        for (int d : dist) ecc = std::max(ecc, d);
        max_dist = std::max(max_dist, ecc);
        hist[v].assign(ecc, 0);
        for (int d : dist)
            if (d > 0) ++hist[v][d - 1];
    }
    std::vector<std::vector<double>> out(n);
    for (NodeId v = 0; v < n; ++v) {
        out[v].assign(max_dist, 0.0);
        const NodeId others = ctx.comp_size[ctx.comp[v]] - 1;
        if (others <= 0) continue;
        for (std::size_t d = 0; d < hist[v].size(); ++d)
            out[v][d] = static_cast<double>(hist[v][d]) / others;
    }
    return out;
}

double relative_entropy(std::span<const double> p, std::span<const double> q, double eps) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions differ in length");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (p.empty()) return 0.0;
    double psum = 0.0, qsum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        psum += p[k] + eps;
        qsum += q[k] + eps;
    }
    double kl = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double pk = (p[k] + eps) / psum;
        const double qk = (q[k] + eps) / qsum;
        kl += pk * std::log(pk / qk);
    }
    return std::max(kl, 0.0);
}

CorrelationMatrix correlation_matrix(const Graph& g, double eps, int workers) {
    const NodeId n = g.num_nodes();
    if (n < 2) throw std::invalid_argument("correlation_matrix requires n >= 2");
    const auto shells = all_shell_distributions(g);

    std::vector<double> r(static_cast<std::size_t>(n) * n, 0.0);
    auto fill_rows = [&](NodeId lo, NodeId hi) {
        for (NodeId i = lo; i < hi; ++i)
            for (NodeId j = i + 1; j < n; ++j) {
                const double rij = relative_entropy(shells[i], shells[j], eps) +
                                   relative_entropy(shells[j], shells[i], eps);
                r[static_cast<std::size_t>(i) * n + j] = rij;
                r[static_cast<std::size_t>(j) * n + i] = rij;
            }
    };
    if (workers <= 1) {
        fill_rows(0, n);
    } else {
        std::vector<std::thread> pool;
        const int w = std::min<int>(workers, n);
        // later rows have less work; interleaving would balance better but the
        // matrices here are small
        const NodeId chunk = (n + w - 1) / w;
        for (int t = 0; t < w; ++t) {
            NodeId b = std::min<NodeId>(n, t * chunk);
            NodeId e = std::min<NodeId>(n, b + chunk);
            if (b < e) pool.emplace_back(fill_rows, b, e);
        }
        for (auto& th : pool) th.join();
    }

    double r_max = 0.0;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            r_max = std::max(r_max, r[static_cast<std::size_t>(i) * n + j]);

    CorrelationMatrix s(n);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) {
            double sij = r_max > 0.0
                             ? 1.0 - r[static_cast<std::size_t>(i) * n + j] / r_max
                             : 1.0;  // degenerate: all nodes structurally identical
            s.set(i, j, std::clamp(sij, 0.0, 1.0));
        }
    return s;
}

CorrelationNetwork threshold_by_bisection(const CorrelationMatrix& s, double tol) {
    const NodeId n = s.num_nodes();
    if (n < 2) throw std::invalid_argument("threshold_by_bisection requires n >= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

    std::vector<NodeId> parent(n);
    auto connected_at = [&](double t) {
        for (NodeId i = 0; i < n; ++i) parent[i] = i;
        auto find = [&](NodeId x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        NodeId components = n;
        for (NodeId i = 0; i < n && components > 1; ++i)
            for (NodeId j = i + 1; j < n; ++j)
                if (s.at(i, j) > t) {
                    NodeId a = find(i), b = find(j);
                    if (a != b) {
                        parent[a] = b;
                        --components;
                    }
                }
        return components == 1;
    };

    if (!connected_at(0.0))
        throw NumericalError("correlation network is disconnected at threshold 0");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (connected_at(mid))
            lo = mid;
        else
            hi = mid;
    }

    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (s.at(i, j) > lo) edges.emplace_back(i, j);
    return {Graph::from_edges(n, std::move(edges)), lo};
}

RepresentativeSet select_representatives(const CorrelationNetwork& cn, std::size_t max_labels) {
    const Graph& g = cn.graph;
    const NodeId n = g.num_nodes();
    std::vector<char> alive(n, 1);
    std::vector<NodeId> deg(n);
    for (NodeId v = 0; v < n; ++v) deg[v] = g.degree(v);

    RepresentativeSet out;
    NodeId remaining = n;
    int round = 0;
    while (remaining > 0) {
        if (max_labels > 0 && out.nodes.size() >= max_labels) {
            out.truncated = true;
            break;
        }
        NodeId best = -1;
        for (NodeId v = 0; v < n; ++v)
            if (alive[v] && (best < 0 || deg[v] > deg[best])) best = v;
        ++round;
        out.nodes.push_back(best);
        out.round.push_back(round);

        // remove best and its surviving neighbors; fix up remaining degrees
        std::vector<NodeId> removed{best};
        for (NodeId u : g.neighbors(best))
            if (alive[u]) removed.push_back(u);
        for (NodeId u : removed) alive[u] = 0;
        remaining -= static_cast<NodeId>(removed.size());
        for (NodeId u : removed)
            for (NodeId w : g.neighbors(u))
                if (alive[w]) --deg[w];
    }
    return out;
}

}  // namespace alge
