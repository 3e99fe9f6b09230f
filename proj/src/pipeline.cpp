#include "alge/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "alge/error.hpp"
#include "alge/imp.hpp"
#include "alge/io.hpp"
#include "alge/metrics.hpp"
#include "alge/predictor.hpp"
#include "alge/rankers.hpp"
#include "alge/rng.hpp"
#include "alge/sampler.hpp"

namespace alge::pipeline {

namespace fs = std::filesystem;

std::vector<GeneratorSpec> synthetic_corpus_specs(int count, NodeId n_min, NodeId n_max,
                                                  std::uint64_t master_seed) {
    if (count < 1) throw std::invalid_argument("corpus size must be >= 1");
    SplitMix64 rng(derive_stream(master_seed, 0x5EED5));
    std::vector<GeneratorSpec> specs;
    for (int i = 0; i < count; ++i) {
        GeneratorSpec spec;
        spec.n = n_min + static_cast<NodeId>(rng.uniform_index(
                             static_cast<std::uint64_t>(n_max - n_min) + 1));
        const NodeId m = 2 + static_cast<NodeId>(rng.uniform_index(3));  // BA m in {2,3,4}
        spec.seed = rng.next();
        if (i % 2 == 0) {
            spec.kind = "ba";
            spec.m = m;
        } else {
            // homogeneous counterpart with the same edge count as ba(n, m)
            spec.kind = "er";
            spec.m = static_cast<std::int64_t>(m) * (m + 1) / 2 +
                     static_cast<std::int64_t>(m) * (spec.n - m - 1);
        }
        specs.push_back(spec);
    }
    return specs;
}

Graph target_graph_from_config(const RunConfig& cfg) {
    if (cfg.graph.empty()) throw DataError("config: graph is not set");
    if (cfg.graph.find(':') != std::string::npos) return GeneratorSpec::parse(cfg.graph).build();
    return load_edge_list(read_file(cfg.graph));
}

std::vector<CorpusItem> load_corpus_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("corpus directory not found: " + dir.string());
    std::vector<fs::path> edge_files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".edges")
            edge_files.push_back(entry.path());
    std::sort(edge_files.begin(), edge_files.end());
    if (edge_files.empty()) throw DataError("corpus directory has no .edges files");

    std::vector<CorpusItem> corpus;
    for (const auto& ef : edge_files) {
        fs::path inf = ef;
        inf.replace_extension(".influence");
        if (!fs::exists(inf))
            throw DataError("corpus graph " + ef.string() + " lacks " + inf.string());
        CorpusItem item;
        item.graph = load_edge_list(read_file(ef));
        item.influence = influence_from_text(read_file(inf));
        item.name = ef.stem().string();
        if (item.influence.num_nodes() != item.graph.num_nodes() || !item.influence.complete())
            throw DataError("corpus influence table does not cover " + ef.string());
        corpus.push_back(std::move(item));
    }
    return corpus;
}

std::uint64_t corpus_seed(std::uint64_t master_seed, int index) {
    return derive_stream(master_seed, 0xC0595, static_cast<std::uint64_t>(index));
}

namespace {

std::string corpus_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "synth_%02d", index);
    return buf;
}

RankTable rank_for_method(const std::string& method, const Graph& g, const RunConfig& cfg,
                          const InfluenceTable* alge_b) {
    if (method == "degree") return rank_degree(g);
    if (method == "kshell") return rank_kshell(g);
    if (method == "hindex") return rank_hindex(g);
    if (method == "ci") return rank_ci(g, cfg.ci_radius);
    if (method == "alge-b") {
        if (alge_b == nullptr) throw DataError("panel requests alge-b but no basic model exists");
        std::vector<double> scores(g.num_nodes());
        for (NodeId v = 0; v < g.num_nodes(); ++v) scores[v] = alge_b->value(v);
        return rank_from_scores(std::move(scores), "alge-b");
    }
    throw DataError("unknown panel method '" + method + "'");
}

}  // namespace

void run_pipeline(const RunConfig& cfg, int workers) {
    const fs::path out = cfg.out_dir;
    const FileMeta meta{"pipeline", cfg.hash()};
    write_atomic(out / "config.resolved", cfg.resolved_text());

    // target network
    Graph prebuilt = target_graph_from_config(cfg);
    write_atomic(out / "target.edges", graph_to_text(prebuilt, meta));
    const Graph g = load_edge_list(read_file(out / "target.edges"));
    const double beta = cfg.resolve_beta(g);
    const auto features = cfg.feature_list();

    // synthetic corpus with simulated labels
    const auto specs = synthetic_corpus_specs(cfg.pretrain_graphs, cfg.pretrain_n_min,
                                              cfg.pretrain_n_max, cfg.master_seed);
    std::vector<CorpusItem> corpus;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const fs::path ef = out / "corpus" / (corpus_name(static_cast<int>(i)) + ".edges");
        write_atomic(ef, graph_to_text(specs[i].build(), meta));
        CorpusItem item;
        item.graph = load_edge_list(read_file(ef));
        SirConfig sim;
        sim.runs = cfg.runs;
        sim.master_seed = corpus_seed(cfg.master_seed, static_cast<int>(i));
        sim.workers = workers;
        sim.beta = std::min(1.0, cfg.beta_multiplier * epidemic_threshold(item.graph));
        item.influence = simulate_influence(item.graph, sim);
        fs::path inf = ef;
        inf.replace_extension(".influence");
        write_atomic(inf, influence_to_text(item.influence, meta));
        corpus.push_back(std::move(item));
    }

    // pretrain the basic model
    GatDims dims;
    dims.input_dim = static_cast<int>(features.size());
    dims.attention_layers = cfg.attention_layers;
    dims.heads = cfg.heads;
    dims.units = cfg.hidden_units;
    dims.head_hidden = cfg.head_hidden;

    std::vector<TrainGraph> train_graphs;
    for (const CorpusItem& item : corpus)
        train_graphs.push_back(make_train_graph(item.graph, item.influence, features));
    TrainConfig pre_cfg;
    pre_cfg.learning_rate = cfg.pretrain_lr;
    pre_cfg.epochs = cfg.pretrain_epochs;
    pre_cfg.seed = derive_stream(cfg.master_seed, 0x0B);
    pre_cfg.stage = TrainConfig::Stage::Pretrain;
    const PredictorParams alge_b = pretrain(train_graphs, dims, pre_cfg);
    write_atomic(out / "alge_b.params", params_to_text(alge_b, meta));

    // representative sampling on the target network
    const CorrelationMatrix corr = correlation_matrix(g, cfg.eps, workers);
    const CorrelationNetwork cn = threshold_by_bisection(corr, cfg.tol);
    const RepresentativeSet reps = select_representatives(cn, cfg.max_labels);
    write_atomic(out / "representatives.csv", representatives_to_text(reps, meta));

    // simulated labels for the representatives
    SirConfig label_sim;
    label_sim.beta = beta;
    label_sim.runs = cfg.runs;
    label_sim.master_seed = cfg.master_seed;
    label_sim.workers = workers;
    const InfluenceTable labels = simulate_influence(g, label_sim, reps.nodes);
    write_atomic(out / "labels.influence", influence_to_text(labels, meta));

    // fine-tune into the comprehensive model
    const NodeFeatures x = node_features(g, features);
    TrainGraph target;
    target.graph = &g;
    target.features = x;
    for (NodeId v : labels.present_nodes())
        target.labels.push_back({v, labels.value(v) / g.num_nodes()});
    TrainConfig fin_cfg;
    fin_cfg.learning_rate = cfg.finetune_lr;
    fin_cfg.epochs = cfg.finetune_epochs;
    fin_cfg.seed = derive_stream(cfg.master_seed, 0x0C);
    fin_cfg.stage = TrainConfig::Stage::Finetune;
    const PredictorParams alge_c = finetune(alge_b, target, fin_cfg);
    write_atomic(out / "alge_c.params", params_to_text(alge_c, meta));

    // predictions and simulated truth
    const InfluenceTable predicted = predict_influence(alge_c, g, x, beta);
    write_atomic(out / "predicted.influence", influence_to_text(predicted, meta));
    const InfluenceTable truth = simulate_influence(g, label_sim);
    write_atomic(out / "truth.influence", influence_to_text(truth, meta));

    // baseline rank tables (plus the basic model where requested)
    const InfluenceTable alge_b_pred = predict_influence(alge_b, g, x, beta);
    std::vector<RankTable> panel;
    for (const std::string& method : cfg.panel_list()) {
        RankTable t = rank_for_method(method, g, cfg, &alge_b_pred);
        std::string fname = method;
        std::replace(fname.begin(), fname.end(), '-', '_');
        write_atomic(out / "ranks" / (fname + ".csv"), rank_to_text(t, meta));
        panel.push_back(std::move(t));
    }

    // influence maximization on the predicted values
    const int k = std::min<int>(cfg.seed_budget, g.num_nodes());
    const SeedSelection sel = select_seeds(g, predicted, k);
    write_atomic(out / "seeds.csv", seeds_to_text(sel, meta));
    const MultiSeedOutcome outcome = simulate_multi_seed(g, sel.seeds, label_sim);
    const OverlapReport rep = overlap_report(g, sel.seeds, truth, outcome);
    write_atomic(out / "overlap.csv", overlap_to_text(rep, meta));
    write_atomic(out / "curve.csv", curve_to_text(infected_ratio_curve(outcome, g.num_nodes()), meta));

    // evaluation against the simulated truth
    std::vector<double> truth_scores(g.num_nodes()), pred_scores(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        truth_scores[v] = truth.value(v);
        pred_scores[v] = predicted.value(v);
    }
    const RankTable truth_rank = rank_from_scores(std::move(truth_scores), "truth");
    const RankTable pred_rank = rank_from_scores(std::move(pred_scores), "alge-c");

    std::ostringstream metrics;
    metrics << "metric,value\n";
    metrics << "beta," << format_double(beta) << "\n";
    metrics << "correlation_threshold," << format_double(cn.threshold) << "\n";
    metrics << "representatives," << reps.nodes.size() << "\n";
    metrics << "kendall_alge-c," << format_double(kendall_tau(truth_rank.rank, pred_rank.rank))
            << "\n";
    for (const RankTable& t : panel)
        metrics << "kendall_" << t.method << ","
                << format_double(kendall_tau(truth_rank.rank, t.rank)) << "\n";
    metrics << "mse_alge-c," << format_double(mse(predicted, truth)) << "\n";
    metrics << "mean_final_infected," << format_double(outcome.mean_final_recovered) << "\n";
    write_atomic(out / "metrics.csv",
                 meta_prefix(meta) + metrics.str());

    const DisputationTable disp = disputation(panel, truth_rank, true);
    write_atomic(out / "disputation.csv", disputation_to_text(disp, meta));
}

}  // namespace alge::pipeline
