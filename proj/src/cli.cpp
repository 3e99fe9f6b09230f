#include "alge/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "alge/error.hpp"
#include "alge/imp.hpp"
#include "alge/io.hpp"
#include "alge/metrics.hpp"
#include "alge/pipeline.hpp"
#include "alge/predictor.hpp"
#include "alge/rankers.hpp"
#include "alge/rng.hpp"
#include "alge/sampler.hpp"

namespace alge::cli {

namespace fs = std::filesystem;

namespace {

RunConfig config_or_default(const std::string& path) {
    return path.empty() ? RunConfig{} : RunConfig::parse_file(path);
}

/// --nodes files: either a representative set csv or whitespace node ids.
std::vector<NodeId> parse_node_list(const std::string& text) {
    if (text.find("node_id,round") != std::string::npos) {
        auto reps = representatives_from_text(text);
        return reps.nodes;
    }
    std::vector<NodeId> nodes;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        std::istringstream ls(line);
        long long v;
        while (ls >> v) nodes.push_back(static_cast<NodeId>(v));
    }
    return nodes;
}

GatDims dims_from_config(const RunConfig& cfg) {
    GatDims dims;
    dims.input_dim = static_cast<int>(cfg.feature_list().size());
    dims.attention_layers = cfg.attention_layers;
    dims.heads = cfg.heads;
    dims.units = cfg.hidden_units;
    dims.head_hidden = cfg.head_hidden;
    return dims;
}

struct App {
    CLI::App app{"ALGE: quantitative node-influence prediction and influence maximization"};

    // generate
    std::string gen_spec, gen_out;
    int gen_count = 1;
    // shared
    std::string graph_path, config_path, out_path, out_dir;
    int workers = 1;
    // simulate
    std::string nodes_path;
    // pretrain / finetune / predict
    std::string corpus_dir, params_path, labels_path;
    // sample
    std::string matrix_out;
    // imp
    std::string influence_path, truth_path;
    int k = 0;
    // evaluate
    std::string pred_path, panel_dir;

    CLI::App* generate = nullptr;
    CLI::App* simulate = nullptr;
    CLI::App* pretrain_cmd = nullptr;
    CLI::App* sample = nullptr;
    CLI::App* finetune_cmd = nullptr;
    CLI::App* predict = nullptr;
    CLI::App* imp = nullptr;
    CLI::App* evaluate = nullptr;
    CLI::App* pipe = nullptr;

    void setup();
    int execute();
};

void App::setup() {
    generate = app.add_subcommand("generate", "write synthetic edge-list files");
    generate->add_option("--spec", gen_spec, "generator spec, e.g. ba:n=200,m=3,seed=7")
        ->required();
    generate->add_option("--out", gen_out, "output file (or directory with --count > 1)")
        ->required();
    generate->add_option("--count", gen_count, "number of graphs (seeds seed..seed+count-1)");
    generate->add_option("--config", config_path, "run configuration file");

    simulate = app.add_subcommand("simulate", "Monte Carlo SIR influence table");
    simulate->add_option("--graph", graph_path)->required();
    simulate->add_option("--config", config_path);
    simulate->add_option("--out", out_path)->required();
    simulate->add_option("--nodes", nodes_path, "restrict to these nodes (file)");
    simulate->add_option("--workers", workers);

    pretrain_cmd = app.add_subcommand("pretrain", "train the basic predictor on a corpus");
    pretrain_cmd->add_option("--corpus", corpus_dir, "dir of NAME.edges + NAME.influence")
        ->required();
    pretrain_cmd->add_option("--config", config_path);
    pretrain_cmd->add_option("--out", out_path)->required();

    sample = app.add_subcommand("sample", "entropy-based representative selection");
    sample->add_option("--graph", graph_path)->required();
    sample->add_option("--config", config_path);
    sample->add_option("--out", out_path)->required();
    sample->add_option("--matrix-out", matrix_out, "also dump the correlation matrix");
    sample->add_option("--workers", workers);

    finetune_cmd = app.add_subcommand("finetune", "fine-tune a predictor on labels");
    finetune_cmd->add_option("--graph", graph_path)->required();
    finetune_cmd->add_option("--params", params_path)->required();
    finetune_cmd->add_option("--labels", labels_path)->required();
    finetune_cmd->add_option("--config", config_path);
    finetune_cmd->add_option("--out", out_path)->required();

    predict = app.add_subcommand("predict", "predicted influence table");
    predict->add_option("--graph", graph_path)->required();
    predict->add_option("--params", params_path)->required();
    predict->add_option("--config", config_path);
    predict->add_option("--out", out_path)->required();

    imp = app.add_subcommand("imp", "greedy influence-maximization seed selection");
    imp->add_option("--graph", graph_path)->required();
    imp->add_option("--influence", influence_path)->required();
    imp->add_option("--truth", truth_path, "true influence for the overlap report");
    imp->add_option("--k", k, "seed budget (default: config seed_budget)");
    imp->add_option("--config", config_path);
    imp->add_option("--out-dir", out_dir)->required();
    imp->add_option("--workers", workers);

    evaluate = app.add_subcommand("evaluate", "Kendall, MSE and disputation metrics");
    evaluate->add_option("--pred", pred_path)->required();
    evaluate->add_option("--truth", truth_path)->required();
    evaluate->add_option("--panel-dir", panel_dir, "directory of rank tables")->required();
    evaluate->add_option("--config", config_path);
    evaluate->add_option("--out-dir", out_dir)->required();

    pipe = app.add_subcommand("pipeline", "full run into the config out_dir");
    pipe->add_option("--config", config_path)->required();
    pipe->add_option("--workers", workers);

    app.require_subcommand(1);
}

int App::execute() {
    if (generate->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"generate", cfg.hash()};
        auto spec = GeneratorSpec::parse(gen_spec);
        if (gen_count < 1) throw std::invalid_argument("--count must be >= 1");
        if (gen_count == 1) {
            write_atomic(gen_out, graph_to_text(spec.build(), meta));
        } else {
            for (int i = 0; i < gen_count; ++i) {
                GeneratorSpec s = spec;
                s.seed = spec.seed + static_cast<std::uint64_t>(i);
                char name[32];
                std::snprintf(name, sizeof(name), "synth_%02d.edges", i);
                write_atomic(fs::path(gen_out) / name, graph_to_text(s.build(), meta));
            }
        }
        return 0;
    }

    if (simulate->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"simulate", cfg.hash()};
        const Graph g = load_edge_list(read_file(graph_path));
        SirConfig sim;
        sim.beta = cfg.resolve_beta(g);
        sim.runs = cfg.runs;
        sim.master_seed = cfg.master_seed;
        sim.workers = workers;
        InfluenceTable table;
        if (nodes_path.empty()) {
            table = simulate_influence(g, sim);
        } else {
            auto nodes = parse_node_list(read_file(nodes_path));
            table = simulate_influence(g, sim, nodes);
        }
        write_atomic(out_path, influence_to_text(table, meta));
        return 0;
    }

    if (pretrain_cmd->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"pretrain", cfg.hash()};
        const auto features = cfg.feature_list();
        auto corpus = pipeline::load_corpus_dir(corpus_dir);
        std::vector<TrainGraph> train_graphs;
        for (const auto& item : corpus)
            train_graphs.push_back(make_train_graph(item.graph, item.influence, features));
        TrainConfig tc;
        tc.learning_rate = cfg.pretrain_lr;
        tc.epochs = cfg.pretrain_epochs;
        tc.seed = derive_stream(cfg.master_seed, 0x0B);
        tc.stage = TrainConfig::Stage::Pretrain;
        const auto params = pretrain(train_graphs, dims_from_config(cfg), tc);
        write_atomic(out_path, params_to_text(params, meta));
        return 0;
    }

    if (sample->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"sample", cfg.hash()};
        const Graph g = load_edge_list(read_file(graph_path));
        const auto corr = correlation_matrix(g, cfg.eps, workers);
        if (!matrix_out.empty()) write_atomic(matrix_out, matrix_to_text(corr, meta));
        const auto cn = threshold_by_bisection(corr, cfg.tol);
        const auto reps = select_representatives(cn, cfg.max_labels);
        write_atomic(out_path, representatives_to_text(reps, meta));
        return 0;
    }

    if (finetune_cmd->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"finetune", cfg.hash()};
        const Graph g = load_edge_list(read_file(graph_path));
        const auto params = params_from_text(read_file(params_path));
        const auto labels = influence_from_text(read_file(labels_path));
        if (labels.num_nodes() > g.num_nodes())
            throw DataError("labels reference nodes beyond the graph");
        TrainGraph target = make_train_graph(g, labels, cfg.feature_list());
        TrainConfig tc;
        tc.learning_rate = cfg.finetune_lr;
        tc.epochs = cfg.finetune_epochs;
        tc.seed = derive_stream(cfg.master_seed, 0x0C);
        tc.stage = TrainConfig::Stage::Finetune;
        const auto tuned = finetune(params, target, tc);
        write_atomic(out_path, params_to_text(tuned, meta));
        return 0;
    }

    if (predict->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"predict", cfg.hash()};
        const Graph g = load_edge_list(read_file(graph_path));
        const auto params = params_from_text(read_file(params_path));
        const auto x = node_features(g, cfg.feature_list());
        const auto table = predict_influence(params, g, x, cfg.resolve_beta(g));
        write_atomic(out_path, influence_to_text(table, meta));
        return 0;
    }

    if (imp->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"imp", cfg.hash()};
        const Graph g = load_edge_list(read_file(graph_path));
        const auto influence = influence_from_text(read_file(influence_path));
        const auto truth =
            truth_path.empty() ? influence : influence_from_text(read_file(truth_path));
        const int budget = k > 0 ? k : cfg.seed_budget;
        const auto sel = select_seeds(g, influence, std::min<int>(budget, g.num_nodes()));
        write_atomic(fs::path(out_dir) / "seeds.csv", seeds_to_text(sel, meta));

        SirConfig sim;
        sim.beta = cfg.resolve_beta(g);
        sim.runs = cfg.runs;
        sim.master_seed = cfg.master_seed;
        sim.workers = workers;
        const auto outcome = simulate_multi_seed(g, sel.seeds, sim);
        const auto report = overlap_report(g, sel.seeds, truth, outcome);
        write_atomic(fs::path(out_dir) / "overlap.csv", overlap_to_text(report, meta));
        write_atomic(fs::path(out_dir) / "curve.csv",
                     curve_to_text(infected_ratio_curve(outcome, g.num_nodes()), meta));
        return 0;
    }

    if (evaluate->parsed()) {
        const RunConfig cfg = config_or_default(config_path);
        const FileMeta meta{"evaluate", cfg.hash()};
        const auto pred = influence_from_text(read_file(pred_path));
        const auto truth = influence_from_text(read_file(truth_path));

        std::vector<fs::path> rank_files;
        for (const auto& entry : fs::directory_iterator(panel_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                rank_files.push_back(entry.path());
        std::sort(rank_files.begin(), rank_files.end());
        std::vector<RankTable> panel;
        for (const auto& f : rank_files) panel.push_back(rank_from_text(read_file(f)));

        std::vector<double> ts(truth.num_nodes()), ps(truth.num_nodes());
        for (NodeId v = 0; v < truth.num_nodes(); ++v) {
            ts[v] = truth.value(v);
            ps[v] = pred.value(v);
        }
        const auto truth_rank = rank_from_scores(std::move(ts), "truth");
        const auto pred_rank = rank_from_scores(std::move(ps), "predicted");

        std::ostringstream metrics;
        metrics << "metric,value\n";
        metrics << "kendall_predicted,"
                << format_double(kendall_tau(truth_rank.rank, pred_rank.rank)) << "\n";
        for (const auto& t : panel)
            metrics << "kendall_" << t.method << ","
                    << format_double(kendall_tau(truth_rank.rank, t.rank)) << "\n";
        metrics << "mse_predicted," << format_double(mse(pred, truth)) << "\n";
        write_atomic(fs::path(out_dir) / "metrics.csv", meta_prefix(meta) + metrics.str());

        if (panel.size() >= 2) {
            const auto disp = disputation(panel, truth_rank, true);
            write_atomic(fs::path(out_dir) / "disputation.csv", disputation_to_text(disp, meta));
        }
        return 0;
    }

    // pipeline
    const RunConfig cfg = RunConfig::parse_file(config_path);
    pipeline::run_pipeline(cfg, workers);
    return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
    App a;
    try {
        a.setup();
        std::vector<const char*> argv{"alge"};
        for (const auto& s : args) argv.push_back(s.c_str());
        try {
            a.app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            return a.app.exit(e) == 0 ? 0 : 1;
        }
        return a.execute();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace alge::cli
