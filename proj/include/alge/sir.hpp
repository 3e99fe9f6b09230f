#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "alge/graph.hpp"

namespace alge {

/// Discrete-time SIR with synchronous updates and recovery after exactly one
/// step (mu = 1). Equivalent in final-size law to bond percolation with bond
/// probability beta, which is what exact_influence_oracle enumerates.
struct SirConfig {
    double beta = 0.0;
    double mu = 1.0;  // must be exactly 1
    int runs = 1000;
    std::uint64_t master_seed = 1;
    int workers = 1;  // execution knob; results are identical for any value

    void validate() const;
};

enum class Provenance { Simulated, Predicted };

/// Per-node influence values: expected final recovered count when the node is
/// the sole initial infected node. Partial tables mark absent nodes with NaN.
class InfluenceTable {
public:
    InfluenceTable() = default;
    InfluenceTable(NodeId n, Provenance provenance, double beta, int runs);

    NodeId num_nodes() const { return static_cast<NodeId>(values_.size()); }
    bool has(NodeId v) const;
    double value(NodeId v) const;  // throws DataError if absent
    void set(NodeId v, double value);
    bool complete() const;
    std::vector<NodeId> present_nodes() const;

    Provenance provenance = Provenance::Simulated;
    double beta = 0.0;
    int runs = 0;

private:
    std::vector<double> values_;
};

/// Single multi-seed realization with root-seed attribution.
struct MultiSeedRun {
    std::vector<std::int64_t> newly_infected;  // per step; step 0 counts the seeds
    std::vector<NodeId> recovered;             // final recovered set, ascending
    std::vector<std::int64_t> attributed;      // per seed, aligned with the seed list
};

/// Run-averaged multi-seed outcome. Integer sums are kept alongside the means
/// so that the attribution identity sum_i IN_i == final recovered count stays
/// checkable without floating-point slack.
struct MultiSeedOutcome {
    std::vector<NodeId> seeds;
    std::vector<double> newly_infected_per_step;  // means; step 0 counts the seeds
    std::vector<double> attributed;               // mean IN_i per seed
    double mean_final_recovered = 0.0;
    std::vector<std::uint64_t> attributed_sums;
    std::uint64_t total_recovered_sum = 0;
    int runs = 0;
};

/// Heterogeneous mean-field epidemic threshold <k> / (<k^2> - <k>).
/// Throws NumericalError when <k^2> <= <k>.
double epidemic_threshold(const Graph& g);

/// Monte Carlo influence for every node. Deterministic for a fixed
/// master_seed and independent of cfg.workers: every (node, run) pair draws
/// from its own derive_stream(master_seed, node, run) substream.
InfluenceTable simulate_influence(const Graph& g, const SirConfig& cfg);

/// Same, restricted to a node subset (partial table; empty subset -> empty).
InfluenceTable simulate_influence(const Graph& g, const SirConfig& cfg,
                                  std::span<const NodeId> subset);

/// One multi-seed realization. Every recovered node is attributed to the root
/// seed of its infector; simultaneous successful infectors are tie-broken by
/// a uniform draw. Seeds attribute to themselves.
MultiSeedRun simulate_multi_seed_run(const Graph& g, std::span<const NodeId> seeds, double beta,
                                     std::uint64_t run_seed);

/// cfg.runs realizations, aggregated. Run r uses substream
/// derive_stream(master_seed, r, kMultiSeedTag).
MultiSeedOutcome simulate_multi_seed(const Graph& g, std::span<const NodeId> seeds,
                                     const SirConfig& cfg);

/// Exact expected final recovered count via bond-percolation enumeration over
/// all 2^m edge configurations. Refuses graphs with more than 20 edges.
double exact_influence_oracle(const Graph& g, NodeId s, double beta);

}  // namespace alge
