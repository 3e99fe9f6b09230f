#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alge/graph.hpp"
#include "alge/sir.hpp"

namespace alge {

/// Dense row-major matrix used for predictor parameters.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

/// One attention head: score e_ij = a . leaky_relu(W_src h_i + W_dst h_j),
/// message W_dst h_j (GATv2 scoring with the shared self-loop).
struct HeadParams {
    Mat w_src, w_dst;          // out_dim x in_dim
    std::vector<double> attn;  // out_dim
};

struct AttnLayerParams {
    int in_dim = 0, out_dim = 0;
    bool average = false;  // heads averaged (last layer) instead of concatenated
    std::vector<HeadParams> heads;
};

/// Architecture knobs. Attention layers 1..L-1 emit heads*units wide
/// concatenations; the last layer keeps that width per head and averages.
struct GatDims {
    int input_dim = 4;
    int attention_layers = 3;
    int heads = 8;
    int units = 8;        // per-head width on concatenating layers
    int head_hidden = 32; // regression head hidden width

    int embed_width() const { return heads * units; }
    void validate() const;
};

/// All weights of the attention stack and the two-layer regression head.
struct PredictorParams {
    GatDims dims;
    std::vector<AttnLayerParams> layers;
    Mat head_w1;
    std::vector<double> head_b1;
    Mat head_w2;  // 1 x hidden
    std::vector<double> head_b2;  // 1

    /// Glorot-uniform initialization, deterministic per seed.
    static PredictorParams init(const GatDims& dims, std::uint64_t seed);
    /// Same shapes, all values zero (gradient container).
    static PredictorParams zeros_like(const PredictorParams& p);

    /// Pointers to every parameter in a fixed documented order.
    std::vector<double*> flat();
    std::vector<const double*> flat() const;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 200;
    std::uint64_t seed = 1;
    enum class Stage { Pretrain, Finetune } stage = Stage::Pretrain;

    void validate() const;
};

struct LabeledNode {
    NodeId node;
    double target;  // influence / n, in (0, 1]
};

/// A graph with features and (possibly partial) labels for training.
struct TrainGraph {
    const Graph* graph = nullptr;
    NodeFeatures features;
    std::vector<LabeledNode> labels;
};

/// Builds a TrainGraph from simulated influence (targets are influence / n).
TrainGraph make_train_graph(const Graph& g, const InfluenceTable& influence,
                            std::span<const NodeFeature> features = kDefaultFeatures);

/// Per-node predicted influence fraction in (0, 1).
std::vector<double> forward(const PredictorParams& params, const Graph& g,
                            const NodeFeatures& x);

/// Mean squared error over the batch and exact gradients of every parameter.
std::pair<double, PredictorParams> loss_and_gradients(const PredictorParams& params,
                                                      const Graph& g, const NodeFeatures& x,
                                                      std::span<const LabeledNode> batch);

/// Adam training from a fresh initialization (the basic ALGE-B model).
/// One full-batch step per graph per epoch, corpus order fixed.
PredictorParams pretrain(std::span<const TrainGraph> corpus, const GatDims& dims,
                         const TrainConfig& cfg);

/// Continues training from existing parameters on the labeled nodes of one
/// target graph (the comprehensive ALGE-C model). epochs may be 0 (identity).
PredictorParams finetune(const PredictorParams& params, const TrainGraph& target,
                         const TrainConfig& cfg);

/// forward() scaled by n and clamped to [1, n]; provenance "predicted".
InfluenceTable predict_influence(const PredictorParams& params, const Graph& g,
                                 const NodeFeatures& x, double beta_tag);

}  // namespace alge
