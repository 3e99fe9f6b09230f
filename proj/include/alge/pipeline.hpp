#pragma once

#include <filesystem>
#include <vector>

#include "alge/config.hpp"
#include "alge/sir.hpp"

namespace alge::pipeline {

/// Deterministic pretraining-corpus plan: alternating Barabasi-Albert graphs
/// (m in {2,3,4}) and uniform graphs with matched edge counts, sizes drawn
/// from [n_min, n_max].
std::vector<GeneratorSpec> synthetic_corpus_specs(int count, NodeId n_min, NodeId n_max,
                                                  std::uint64_t master_seed);

/// Target graph from the config: an edge-list path, or a generator spec
/// (anything containing ':').
Graph target_graph_from_config(const RunConfig& cfg);

struct CorpusItem {
    Graph graph;
    InfluenceTable influence;
    std::string name;
};

/// Loads NAME.edges / NAME.influence pairs from a corpus directory, sorted
/// by name. Every edge list must have its influence sibling.
std::vector<CorpusItem> load_corpus_dir(const std::filesystem::path& dir);

/// Per-corpus-graph master seed, derived from the run master seed.
std::uint64_t corpus_seed(std::uint64_t master_seed, int index);

/// End-to-end run into cfg.out_dir: corpus, pretrain, sample, label,
/// finetune, predict, IMP, evaluate. Byte-deterministic for a fixed config,
/// whatever the worker count.
void run_pipeline(const RunConfig& cfg, int workers);

}  // namespace alge::pipeline
