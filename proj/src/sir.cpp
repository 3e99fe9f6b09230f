#include "alge/sir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "alge/error.hpp"
#include "alge/rng.hpp"

namespace alge {

namespace {

constexpr std::uint64_t kMultiSeedTag = 0x4D53454544ULL;  // stream tag for multi-seed runs

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

// reusable per-worker buffers; epoch stamps avoid clearing between runs
struct Scratch {
    std::vector<std::uint32_t> stamp;
    std::vector<std::uint8_t> state;  // 1 = infected, 2 = recovered (unstamped = susceptible)
    std::vector<NodeId> frontier, next;
    std::uint32_t epoch = 0;

    explicit Scratch(NodeId n) : stamp(n, 0), state(n, 0) {}

    void begin() {
        if (++epoch == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            epoch = 1;
        }
        frontier.clear();
        next.clear();
    }
    bool susceptible(NodeId v) const { return stamp[v] != epoch; }
    void infect(NodeId v) {
        stamp[v] = epoch;
        state[v] = 1;
    }
    void recover(NodeId v) { state[v] = 2; }
};

// One single-seed realization; returns the final recovered count. Because a
// node's infection this step is the OR of independent Bernoulli attempts, the
// remaining attempts can be skipped once one succeeds without changing the law.
std::int64_t run_single_seed(const Graph& g, NodeId s, double beta, SplitMix64& rng,
                             Scratch& sc) {
    sc.begin();
    sc.infect(s);
    sc.frontier.push_back(s);
    std::int64_t total = 1;
    while (!sc.frontier.empty()) {
        sc.next.clear();
        for (NodeId u : sc.frontier)
            for (NodeId v : g.neighbors(u))
                if (sc.susceptible(v) && rng.bernoulli(beta)) {
                    sc.infect(v);
                    sc.next.push_back(v);
                    ++total;
                }
        for (NodeId u : sc.frontier) sc.recover(u);
        sc.frontier.swap(sc.next);
    }
    return total;
}

int clamp_workers(int workers, std::size_t tasks) {
    if (workers < 1) workers = 1;
    return static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
}

}  // namespace

void SirConfig::validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in [0,1]");
    if (mu != 1.0) throw std::invalid_argument("mu must be exactly 1");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
}

InfluenceTable::InfluenceTable(NodeId n, Provenance provenance, double beta, int runs)
    : provenance(provenance), beta(beta), runs(runs), values_(n, kAbsent) {}

bool InfluenceTable::has(NodeId v) const {
    return v >= 0 && v < num_nodes() && !std::isnan(values_[v]);
}

double InfluenceTable::value(NodeId v) const {
    if (!has(v)) throw DataError("influence table has no value for node " + std::to_string(v));
    return values_[v];
}

void InfluenceTable::set(NodeId v, double value) {
    if (v < 0 || v >= num_nodes()) throw std::invalid_argument("node out of range");
    values_[v] = value;
}

bool InfluenceTable::complete() const {
    return std::none_of(values_.begin(), values_.end(), [](double x) { return std::isnan(x); });
}

std::vector<NodeId> InfluenceTable::present_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < num_nodes(); ++v)
        if (!std::isnan(values_[v])) out.push_back(v);
    return out;
}

double epidemic_threshold(const Graph& g) {
    const NodeId n = g.num_nodes();
    if (n < 1) throw std::invalid_argument("epidemic_threshold requires n >= 1");
    // <k>/(<k^2> - <k>) == 2m / (sum k^2 - 2m); integer sums keep this exact
    std::uint64_t sum = 0, sum_sq = 0;
    for (NodeId v = 0; v < n; ++v) {
        std::uint64_t d = static_cast<std::uint64_t>(g.degree(v));
        sum += d;
        sum_sq += d * d;
    }
    if (sum_sq <= sum)
        throw NumericalError("epidemic threshold undefined: <k^2> <= <k>");
    return static_cast<double>(sum) / static_cast<double>(sum_sq - sum);
}

InfluenceTable simulate_influence(const Graph& g, const SirConfig& cfg) {
    std::vector<NodeId> all(g.num_nodes());
    std::iota(all.begin(), all.end(), 0);
    return simulate_influence(g, cfg, all);
}

InfluenceTable simulate_influence(const Graph& g, const SirConfig& cfg,
                                  std::span<const NodeId> subset) {
    cfg.validate();
    InfluenceTable table(g.num_nodes(), Provenance::Simulated, cfg.beta, cfg.runs);
    for (NodeId v : subset)
        if (v < 0 || v >= g.num_nodes()) throw std::invalid_argument("subset node out of range");

    const int workers = clamp_workers(cfg.workers, subset.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        Scratch sc(g.num_nodes());
        for (std::size_t idx = begin; idx < end; ++idx) {
            const NodeId s = subset[idx];
            std::uint64_t total = 0;
            for (int run = 0; run < cfg.runs; ++run) {
                SplitMix64 rng(derive_stream(cfg.master_seed, static_cast<std::uint64_t>(s),
                                             static_cast<std::uint64_t>(run)));
                total += static_cast<std::uint64_t>(run_single_seed(g, s, cfg.beta, rng, sc));
            }
            table.set(s, static_cast<double>(total) / cfg.runs);
        }
    };

    if (workers <= 1) {
        work(0, subset.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (subset.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::size_t b = std::min(subset.size(), w * chunk);
            std::size_t e = std::min(subset.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& t : pool) t.join();
    }
    return table;
}

MultiSeedRun simulate_multi_seed_run(const Graph& g, std::span<const NodeId> seeds, double beta,
                                     std::uint64_t run_seed) {
    if (seeds.empty()) throw std::invalid_argument("seed set must be nonempty");
    std::vector<NodeId> sorted_seeds(seeds.begin(), seeds.end());
    std::sort(sorted_seeds.begin(), sorted_seeds.end());
    if (std::adjacent_find(sorted_seeds.begin(), sorted_seeds.end()) != sorted_seeds.end())
        throw std::invalid_argument("seed set must be distinct");
    for (NodeId s : sorted_seeds)
        if (s < 0 || s >= g.num_nodes()) throw std::invalid_argument("seed out of range");

    const NodeId n = g.num_nodes();
    SplitMix64 rng(run_seed);
    std::vector<int> seed_index(n, -1);
    for (std::size_t i = 0; i < seeds.size(); ++i) seed_index[seeds[i]] = static_cast<int>(i);

    std::vector<std::uint8_t> status(n, 0);  // 0=S, 1=I, 2=R
    std::vector<int> root(n, -1);
    std::vector<NodeId> frontier;
    for (NodeId s : sorted_seeds) {
        status[s] = 1;
        root[s] = seed_index[s];
        frontier.push_back(s);
    }

    MultiSeedRun out;
    out.attributed.assign(seeds.size(), 0);
    out.newly_infected.push_back(static_cast<std::int64_t>(seeds.size()));

    std::vector<std::pair<NodeId, NodeId>> hits;  // (target, infector); all attempts drawn
    std::vector<NodeId> next;
    while (!frontier.empty()) {
        hits.clear();
        for (NodeId u : frontier)
            for (NodeId v : g.neighbors(u))
                if (status[v] == 0 && rng.bernoulli(beta)) hits.emplace_back(v, u);
        std::sort(hits.begin(), hits.end());
        next.clear();
        for (std::size_t i = 0; i < hits.size();) {
            std::size_t j = i;
            while (j < hits.size() && hits[j].first == hits[i].first) ++j;
            const NodeId v = hits[i].first;
            const NodeId infector = hits[i + rng.uniform_index(j - i)].second;
            status[v] = 1;
            root[v] = root[infector];
            next.push_back(v);
            i = j;
        }
        for (NodeId u : frontier) status[u] = 2;
        out.newly_infected.push_back(static_cast<std::int64_t>(next.size()));
        frontier.swap(next);
    }
    if (out.newly_infected.size() > 1 && out.newly_infected.back() == 0)
        out.newly_infected.pop_back();

    for (NodeId v = 0; v < n; ++v)
        if (status[v] == 2) {
            out.recovered.push_back(v);
            ++out.attributed[root[v]];
        }
    return out;
}

MultiSeedOutcome simulate_multi_seed(const Graph& g, std::span<const NodeId> seeds,
                                     const SirConfig& cfg) {
    cfg.validate();
    MultiSeedOutcome out;
    out.seeds.assign(seeds.begin(), seeds.end());
    out.runs = cfg.runs;
    out.attributed_sums.assign(seeds.size(), 0);

    struct Partial {
        std::vector<std::uint64_t> step_sums;
        std::vector<std::uint64_t> attributed;
        std::uint64_t recovered = 0;
    };
    const int workers = clamp_workers(cfg.workers, static_cast<std::size_t>(cfg.runs));
    std::vector<Partial> parts(workers);

    auto work = [&](int w, int begin, int end) {
        Partial& p = parts[w];
        p.attributed.assign(seeds.size(), 0);
        for (int run = begin; run < end; ++run) {
            auto r = simulate_multi_seed_run(
                g, seeds, cfg.beta,
                derive_stream(cfg.master_seed, static_cast<std::uint64_t>(run), kMultiSeedTag));
            if (r.newly_infected.size() > p.step_sums.size())
                p.step_sums.resize(r.newly_infected.size(), 0);
            for (std::size_t t = 0; t < r.newly_infected.size(); ++t)
                p.step_sums[t] += static_cast<std::uint64_t>(r.newly_infected[t]);
            for (std::size_t i = 0; i < seeds.size(); ++i)
                p.attributed[i] += static_cast<std::uint64_t>(r.attributed[i]);
            p.recovered += static_cast<std::uint64_t>(r.recovered.size());
        }
    };

    if (workers <= 1) {
        work(0, 0, cfg.runs);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (cfg.runs + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int b = std::min(cfg.runs, w * chunk);
            int e = std::min(cfg.runs, b + chunk);
            if (b < e) pool.emplace_back(work, w, b, e);
        }
        for (auto& t : pool) t.join();
    }

    std::vector<std::uint64_t> step_sums;
    for (const Partial& p : parts) {
        if (p.step_sums.size() > step_sums.size()) step_sums.resize(p.step_sums.size(), 0);
        for (std::size_t t = 0; t < p.step_sums.size(); ++t) step_sums[t] += p.step_sums[t];
        for (std::size_t i = 0; i < seeds.size(); ++i) out.attributed_sums[i] += p.attributed[i];
        out.total_recovered_sum += p.recovered;
    }
    out.newly_infected_per_step.resize(step_sums.size());
    for (std::size_t t = 0; t < step_sums.size(); ++t)
        out.newly_infected_per_step[t] = static_cast<double>(step_sums[t]) / cfg.runs;
    out.attributed.resize(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        out.attributed[i] = static_cast<double>(out.attributed_sums[i]) / cfg.runs;
    out.mean_final_recovered = static_cast<double>(out.total_recovered_sum) / cfg.runs;
    return out;
}

double exact_influence_oracle(const Graph& g, NodeId s, double beta) {
    if (s < 0 || s >= g.num_nodes()) throw std::invalid_argument("source out of range");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in [0,1]");
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
    if (m > 20) throw std::invalid_argument("exact_influence_oracle refuses graphs with m > 20");

    std::vector<double> pow_open(m + 1), pow_closed(m + 1);
    pow_open[0] = pow_closed[0] = 1.0;
    for (int i = 1; i <= m; ++i) {
        pow_open[i] = pow_open[i - 1] * beta;
        pow_closed[i] = pow_closed[i - 1] * (1.0 - beta);
    }

    const NodeId n = g.num_nodes();
    std::vector<NodeId> parent(n);
    auto find = [&](NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    double expected = 0.0;
    std::vector<NodeId> size(n);
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::iota(parent.begin(), parent.end(), 0);
        std::fill(size.begin(), size.end(), 1);
        int open = 0;
        for (int e = 0; e < m; ++e)
            if (mask & (1u << e)) {
                ++open;
                NodeId a = find(edges[e].first), b = find(edges[e].second);
                if (a != b) {
                    parent[a] = b;
                    size[b] += size[a];
                }
            }
        expected += pow_open[open] * pow_closed[m - open] * size[find(s)];
    }
    return expected;
}

}  // namespace alge
