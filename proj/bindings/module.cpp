#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <sstream>

#include "alge/error.hpp"

#include "alge/cli.hpp"
#include "alge/config.hpp"
#include "alge/graph.hpp"
#include "alge/imp.hpp"
#include "alge/io.hpp"
#include "alge/metrics.hpp"
#include "alge/pipeline.hpp"
#include "alge/predictor.hpp"
#include "alge/rankers.hpp"
#include "alge/sampler.hpp"
#include "alge/sir.hpp"

namespace py = pybind11;
using namespace alge;

namespace {

std::vector<std::vector<double>> features_rows(const NodeFeatures& x) {
    std::vector<std::vector<double>> rows(x.n);
    for (NodeId v = 0; v < x.n; ++v)
        for (int k = 0; k < x.dim; ++k) rows[v].push_back(x.at(v, k));
    return rows;
}

std::vector<NodeFeature> features_from_names(const std::vector<std::string>& names) {
    std::vector<NodeFeature> out;
    for (const auto& n : names) out.push_back(node_feature_from_name(n));
    return out;
}

}  // namespace

PYBIND11_MODULE(_alge, m) {
    m.doc() = "Node-influence prediction and influence maximization on networks";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](NodeId n, const std::vector<Edge>& edges) {
                 return Graph::from_edges(n, edges);
             }),
             py::arg("n"), py::arg("edges"))
        .def_property_readonly("num_nodes", &Graph::num_nodes)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def("degree", &Graph::degree)
        .def("neighbors",
             [](const Graph& g, NodeId v) {
                 auto nb = g.neighbors(v);
                 return std::vector<NodeId>(nb.begin(), nb.end());
             })
        .def("has_edge", &Graph::has_edge)
        .def("edges", [](const Graph& g) { return g.edges(); })
        .def("__repr__", [](const Graph& g) {
            std::ostringstream ss;
            ss << "Graph(n=" << g.num_nodes() << ", m=" << g.num_edges() << ")";
            return ss.str();
        });

    m.def("load_edge_list", [](const std::string& text) { return load_edge_list(text); },
          py::arg("text"), "Parse an edge list from text ('#' comments allowed).");
    m.def("load_edge_list_file",
          [](const std::string& path) { return load_edge_list(read_file(path)); });
    m.def("generate_ba", &generate_ba, py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def("generate_er", &generate_er, py::arg("n"), py::arg("m_target"), py::arg("seed"));
    m.def("bfs_order", &bfs_order);
    m.def("core_numbers", &core_numbers);
    m.def("degree_stats", [](const Graph& g) {
        auto s = degree_stats(g);
        return py::make_tuple(s.mean, s.mean_sq);
    });
    m.def(
        "node_features",
        [](const Graph& g, const std::vector<std::string>& names) {
            if (names.empty()) return features_rows(node_features(g));
            auto f = features_from_names(names);
            return features_rows(node_features(g, f));
        },
        py::arg("graph"), py::arg("features") = std::vector<std::string>{});

    py::enum_<Provenance>(m, "Provenance")
        .value("SIMULATED", Provenance::Simulated)
        .value("PREDICTED", Provenance::Predicted);

    py::class_<InfluenceTable>(m, "InfluenceTable")
        .def(py::init([](const std::vector<double>& values, Provenance prov, double beta,
                         int runs) {
                 InfluenceTable t(static_cast<NodeId>(values.size()), prov, beta, runs);
                 for (NodeId v = 0; v < t.num_nodes(); ++v) t.set(v, values[v]);
                 return t;
             }),
             py::arg("values"), py::arg("provenance") = Provenance::Simulated,
             py::arg("beta") = 0.0, py::arg("runs") = 0)
        .def_property_readonly("num_nodes", &InfluenceTable::num_nodes)
        .def_readonly("beta", &InfluenceTable::beta)
        .def_readonly("runs", &InfluenceTable::runs)
        .def_readonly("provenance", &InfluenceTable::provenance)
        .def("has", &InfluenceTable::has)
        .def("value", &InfluenceTable::value)
        .def("present_nodes", &InfluenceTable::present_nodes)
        .def("values", [](const InfluenceTable& t) {
            std::vector<double> out;
            for (NodeId v = 0; v < t.num_nodes(); ++v)
                out.push_back(t.has(v) ? t.value(v) : std::numeric_limits<double>::quiet_NaN());
            return out;
        })
        .def("to_text", [](const InfluenceTable& t) { return influence_to_text(t); })
        .def_static("from_text", &influence_from_text);

    py::class_<SirConfig>(m, "SirConfig")
        .def(py::init<>())
        .def_readwrite("beta", &SirConfig::beta)
        .def_readwrite("mu", &SirConfig::mu)
        .def_readwrite("runs", &SirConfig::runs)
        .def_readwrite("master_seed", &SirConfig::master_seed)
        .def_readwrite("workers", &SirConfig::workers);

    py::class_<MultiSeedOutcome>(m, "MultiSeedOutcome")
        .def_readonly("seeds", &MultiSeedOutcome::seeds)
        .def_readonly("newly_infected_per_step", &MultiSeedOutcome::newly_infected_per_step)
        .def_readonly("attributed", &MultiSeedOutcome::attributed)
        .def_readonly("mean_final_recovered", &MultiSeedOutcome::mean_final_recovered)
        .def_readonly("attributed_sums", &MultiSeedOutcome::attributed_sums)
        .def_readonly("total_recovered_sum", &MultiSeedOutcome::total_recovered_sum)
        .def_readonly("runs", &MultiSeedOutcome::runs);

    m.def("epidemic_threshold", &epidemic_threshold);
    m.def(
        "simulate_influence",
        [](const Graph& g, const SirConfig& cfg, const std::optional<std::vector<NodeId>>& nodes) {
            if (nodes) return simulate_influence(g, cfg, *nodes);
            return simulate_influence(g, cfg);
        },
        py::arg("graph"), py::arg("config"), py::arg("nodes") = std::nullopt,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "simulate_multi_seed",
        [](const Graph& g, const std::vector<NodeId>& seeds, const SirConfig& cfg) {
            return simulate_multi_seed(g, seeds, cfg);
        },
        py::call_guard<py::gil_scoped_release>());
    m.def("exact_influence_oracle", &exact_influence_oracle);

    py::class_<RankTable>(m, "RankTable")
        .def_readonly("rank", &RankTable::rank)
        .def_readonly("score", &RankTable::score)
        .def_readonly("method", &RankTable::method);
    m.def("rank_degree", &rank_degree);
    m.def("rank_kshell", &rank_kshell);
    m.def("rank_hindex", &rank_hindex);
    m.def("rank_ci", &rank_ci, py::arg("graph"), py::arg("ell") = 2);
    m.def("rank_from_scores", &rank_from_scores);

    py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
        .def_property_readonly("num_nodes", &CorrelationMatrix::num_nodes)
        .def("at", &CorrelationMatrix::at)
        .def_static("from_values", &CorrelationMatrix::from_values);
    py::class_<CorrelationNetwork>(m, "CorrelationNetwork")
        .def_readonly("graph", &CorrelationNetwork::graph)
        .def_readonly("threshold", &CorrelationNetwork::threshold);
    py::class_<RepresentativeSet>(m, "RepresentativeSet")
        .def_readonly("nodes", &RepresentativeSet::nodes)
        .def_readonly("round", &RepresentativeSet::round)
        .def_readonly("truncated", &RepresentativeSet::truncated);

    m.def("shell_distribution", &shell_distribution);
    m.def("relative_entropy",
          [](const std::vector<double>& p, const std::vector<double>& q, double eps) {
              return relative_entropy(p, q, eps);
          },
          py::arg("p"), py::arg("q"), py::arg("eps") = 1e-9);
    m.def("correlation_matrix", &correlation_matrix, py::arg("graph"), py::arg("eps") = 1e-9,
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("threshold_by_bisection", &threshold_by_bisection, py::arg("matrix"),
          py::arg("tol") = 1e-6);
    m.def("select_representatives", &select_representatives, py::arg("network"),
          py::arg("max_labels") = 0);

    py::class_<GatDims>(m, "GatDims")
        .def(py::init<>())
        .def_readwrite("input_dim", &GatDims::input_dim)
        .def_readwrite("attention_layers", &GatDims::attention_layers)
        .def_readwrite("heads", &GatDims::heads)
        .def_readwrite("units", &GatDims::units)
        .def_readwrite("head_hidden", &GatDims::head_hidden);

    py::class_<TrainConfig> tc(m, "TrainConfig");
    py::enum_<TrainConfig::Stage>(tc, "Stage")
        .value("PRETRAIN", TrainConfig::Stage::Pretrain)
        .value("FINETUNE", TrainConfig::Stage::Finetune);
    tc.def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("stage", &TrainConfig::stage);

    py::class_<PredictorParams>(m, "PredictorParams")
        .def("to_text", [](const PredictorParams& p) { return params_to_text(p); })
        .def_static("from_text", &params_from_text);

    m.def(
        "pretrain",
        [](const std::vector<Graph>& graphs, const std::vector<InfluenceTable>& tables,
           const GatDims& dims, const TrainConfig& cfg, const std::vector<std::string>& names) {
            if (graphs.size() != tables.size())
                throw DataError("graphs and influence tables must align");
            const auto feats = names.empty() ? std::vector<NodeFeature>(std::begin(kDefaultFeatures),
                                                                        std::end(kDefaultFeatures))
                                             : features_from_names(names);
            std::vector<TrainGraph> corpus;
            for (std::size_t i = 0; i < graphs.size(); ++i)
                corpus.push_back(make_train_graph(graphs[i], tables[i], feats));
            return pretrain(corpus, dims, cfg);
        },
        py::arg("graphs"), py::arg("influences"), py::arg("dims"), py::arg("config"),
        py::arg("features") = std::vector<std::string>{});
    m.def(
        "finetune",
        [](const PredictorParams& params, const Graph& g, const InfluenceTable& labels,
           const TrainConfig& cfg, const std::vector<std::string>& names) {
            const auto feats = names.empty() ? std::vector<NodeFeature>(std::begin(kDefaultFeatures),
                                                                        std::end(kDefaultFeatures))
                                             : features_from_names(names);
            return finetune(params, make_train_graph(g, labels, feats), cfg);
        },
        py::arg("params"), py::arg("graph"), py::arg("labels"), py::arg("config"),
        py::arg("features") = std::vector<std::string>{});
    m.def(
        "predict_influence",
        [](const PredictorParams& params, const Graph& g, double beta_tag,
           const std::vector<std::string>& names) {
            const auto feats = names.empty() ? std::vector<NodeFeature>(std::begin(kDefaultFeatures),
                                                                        std::end(kDefaultFeatures))
                                             : features_from_names(names);
            return predict_influence(params, g, node_features(g, feats), beta_tag);
        },
        py::arg("params"), py::arg("graph"), py::arg("beta_tag") = 0.0,
        py::arg("features") = std::vector<std::string>{});

    py::class_<SeedSelection>(m, "SeedSelection")
        .def_readonly("seeds", &SeedSelection::seeds)
        .def_readonly("residual", &SeedSelection::residual)
        .def_readonly("covered", &SeedSelection::covered)
        .def_readonly("covered_union", &SeedSelection::covered_union)
        .def_readonly("budget", &SeedSelection::budget)
        .def_readonly("covered_all", &SeedSelection::covered_all);
    py::class_<OverlapReport>(m, "OverlapReport")
        .def_readonly("seeds", &OverlapReport::seeds)
        .def_readonly("overlap", &OverlapReport::overlap)
        .def_readonly("individual", &OverlapReport::individual)
        .def_readonly("attributed", &OverlapReport::attributed)
        .def_readonly("decrease", &OverlapReport::decrease);

    m.def("influence_ranges", &influence_ranges);
    m.def("select_seeds", &select_seeds, py::arg("graph"), py::arg("influence"), py::arg("k"));
    m.def("overlap_report",
          [](const Graph& g, const std::vector<NodeId>& seeds, const InfluenceTable& truth,
             const MultiSeedOutcome& outcome) { return overlap_report(g, seeds, truth, outcome); });

    m.def("kendall_tau", [](const std::vector<int>& x, const std::vector<int>& y) {
        return kendall_tau(x, y);
    });
    m.def("mse", &mse);
    m.def("infected_ratio_curve", &infected_ratio_curve);
    m.def(
        "disputation",
        [](const std::vector<RankTable>& panel, const RankTable& truth, bool exclude_worst) {
            auto d = disputation(panel, truth, exclude_worst);
            return d.disputation;
        },
        py::arg("panel"), py::arg("truth"), py::arg("exclude_worst") = true);

    m.def("run_cli", &cli::run, "Run a CLI command in-process; returns the exit code.");

    m.attr("__version__") = "0.1.0";
}
