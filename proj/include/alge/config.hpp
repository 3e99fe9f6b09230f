#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alge/graph.hpp"

namespace alge {

/// Plain-text key=value run configuration. Every key has a default; unknown
/// keys are rejected. The resolved form (defaults applied, fixed key order)
/// is what gets echoed into the output directory and hashed.
struct RunConfig {
    std::string graph;  // edge-list path, or generator spec "ba:n=..,m=..,seed=.."
    std::string out_dir = "out";
    std::uint64_t master_seed = 1;
    std::string beta = "auto";  // number in [0,1], or 'auto' = beta_multiplier * beta_c
    double beta_multiplier = 1.5;
    int runs = 1000;
    double eps = 1e-9;
    double tol = 1e-6;
    std::uint64_t max_labels = 0;  // 0 = unlimited
    int pretrain_graphs = 20;
    int pretrain_n_min = 100;
    int pretrain_n_max = 500;
    int pretrain_epochs = 200;
    double pretrain_lr = 1e-3;
    int finetune_epochs = 100;
    double finetune_lr = 1e-4;
    int heads = 8;
    int attention_layers = 3;
    int hidden_units = 8;
    int head_hidden = 32;
    std::string features = "degree,core,clustering,avg_neighbor_degree";
    int seed_budget = 15;
    int ci_radius = 2;
    std::string panel = "degree,kshell,hindex,ci,alge-b";

    static RunConfig parse_text(const std::string& text);
    static RunConfig parse_file(const std::string& path);

    /// Canonical key=value text with every default applied.
    std::string resolved_text() const;
    /// FNV-1a hash of the resolved text, as fixed-width hex.
    std::string hash() const;

    std::vector<NodeFeature> feature_list() const;
    std::vector<std::string> panel_list() const;

    /// Resolves beta for a graph: explicit value, or multiplier * beta_c
    /// clamped to 1 (with a warning on stderr when clamping kicks in).
    double resolve_beta(const Graph& g) const;

    void validate() const;
};

/// Parsed generator spec ("ba:n=200,m=3,seed=7" or "er:n=10,m=0,seed=1").
struct GeneratorSpec {
    std::string kind;  // "ba" | "er"
    NodeId n = 0;
    std::int64_t m = 0;
    std::uint64_t seed = 0;

    static GeneratorSpec parse(const std::string& text);
    Graph build() const;
};

}  // namespace alge
