#include "alge/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alge/error.hpp"
#include "alge/rng.hpp"

namespace alge {

namespace {

constexpr double kLeakySlope = 0.2;

double leaky(double z) { return z > 0 ? z : kLeakySlope * z; }
double leaky_grad(double z) { return z > 0 ? 1.0 : kLeakySlope; }
double elu(double z) { return z > 0 ? z : std::expm1(z); }
// derivative recovered from the activation value: exp(z) = elu(z)+1 for z <= 0
double elu_grad_from_value(double y) { return y > 0 ? 1.0 : y + 1.0; }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// adjacency plus self-loops, targets sorted ascending
struct Arcs {
    std::vector<std::int64_t> off;
    std::vector<NodeId> tgt;
};

Arcs build_arcs(const Graph& g) {
    const NodeId n = g.num_nodes();
    Arcs arcs;
    arcs.off.assign(static_cast<std::size_t>(n) + 1, 0);
    for (NodeId i = 0; i < n; ++i) arcs.off[i + 1] = arcs.off[i] + g.degree(i) + 1;
    arcs.tgt.resize(static_cast<std::size_t>(arcs.off[n]));
    for (NodeId i = 0; i < n; ++i) {
        auto* out = arcs.tgt.data() + arcs.off[i];
        bool placed = false;
        for (NodeId j : g.neighbors(i)) {
            if (!placed && i < j) {
                *out++ = i;
                placed = true;
            }
            *out++ = j;
        }
        if (!placed) *out = i;
    }
    return arcs;
}

struct LayerCache {
    std::vector<double> input;                // n x in_dim
    std::vector<std::vector<double>> u, v;    // per head, n x out_dim
    std::vector<std::vector<double>> alpha;   // per head, one entry per arc
};

struct ForwardCache {
    Arcs arcs;
    std::vector<LayerCache> layers;
    std::vector<double> attn_out;  // n x embed_width, input of the regression head
    std::vector<double> h1;        // n x head_hidden, post-ELU
    std::vector<double> yhat;      // n
};

// y[f] = W[f][:] . x, rows contiguous
void apply_mat(const Mat& w, const double* x, double* y) {
    for (int r = 0; r < w.rows; ++r) {
        const double* row = w.a.data() + static_cast<std::size_t>(r) * w.cols;
        double acc = 0.0;
        for (int c = 0; c < w.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void run_forward(const PredictorParams& params, const Graph& g, const NodeFeatures& x,
                 ForwardCache& fc) {
    const NodeId n = g.num_nodes();
    if (x.n != n) throw std::invalid_argument("feature row count does not match the graph");
    if (x.dim != params.dims.input_dim)
        throw std::invalid_argument("feature width does not match the predictor input_dim");

    fc.arcs = build_arcs(g);
    fc.layers.assign(params.layers.size(), {});

    std::vector<double> cur(x.data);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const AttnLayerParams& layer = params.layers[l];
        LayerCache& lc = fc.layers[l];
        lc.input = cur;
        const int fin = layer.in_dim;
        const int fout = layer.out_dim;
        const int heads = static_cast<int>(layer.heads.size());
        const int width = layer.average ? fout : fout * heads;

        std::vector<double> combined(static_cast<std::size_t>(n) * width, 0.0);
        lc.u.assign(heads, {});
        lc.v.assign(heads, {});
        lc.alpha.assign(heads, {});

        std::vector<double> e;
        for (int h = 0; h < heads; ++h) {
            const HeadParams& hp = layer.heads[h];
            auto& u = lc.u[h];
            auto& v = lc.v[h];
            u.resize(static_cast<std::size_t>(n) * fout);
            v.resize(static_cast<std::size_t>(n) * fout);
            for (NodeId i = 0; i < n; ++i) {
                apply_mat(hp.w_src, cur.data() + static_cast<std::size_t>(i) * fin,
                          u.data() + static_cast<std::size_t>(i) * fout);
                apply_mat(hp.w_dst, cur.data() + static_cast<std::size_t>(i) * fin,
                          v.data() + static_cast<std::size_t>(i) * fout);
            }
            auto& alpha = lc.alpha[h];
            alpha.resize(fc.arcs.tgt.size());
            for (NodeId i = 0; i < n; ++i) {
                const auto begin = fc.arcs.off[i], end = fc.arcs.off[i + 1];
                e.assign(static_cast<std::size_t>(end - begin), 0.0);
                const double* ui = u.data() + static_cast<std::size_t>(i) * fout;
                double emax = -1e300;
                for (auto k = begin; k < end; ++k) {
                    const double* vj =
                        v.data() + static_cast<std::size_t>(fc.arcs.tgt[k]) * fout;
                    double score = 0.0;
                    for (int f = 0; f < fout; ++f) score += hp.attn[f] * leaky(ui[f] + vj[f]);
                    e[k - begin] = score;
                    emax = std::max(emax, score);
                }
                double z = 0.0;
                for (auto k = begin; k < end; ++k) {
                    const double w = std::exp(e[k - begin] - emax);
                    alpha[k] = w;
                    z += w;
                }
                double* out = combined.data() + static_cast<std::size_t>(i) * width +
                              (layer.average ? 0 : static_cast<std::size_t>(h) * fout);
                for (auto k = begin; k < end; ++k) {
                    alpha[k] /= z;
                    const double* vj =
                        v.data() + static_cast<std::size_t>(fc.arcs.tgt[k]) * fout;
                    for (int f = 0; f < fout; ++f) out[f] += alpha[k] * vj[f];
                }
            }
        }
        if (layer.average) {
            const double inv = 1.0 / heads;
            for (double& c : combined) c *= inv;
        }
        if (l + 1 < params.layers.size()) {
            for (double& c : combined) c = elu(c);
            cur = std::move(combined);
        } else {
            fc.attn_out = std::move(combined);
        }
    }

    // regression head: linear -> ELU -> linear -> sigmoid
    const int width = params.head_w1.cols;
    const int hidden = params.head_w1.rows;
    fc.h1.resize(static_cast<std::size_t>(n) * hidden);
    fc.yhat.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        double* h1 = fc.h1.data() + static_cast<std::size_t>(i) * hidden;
        apply_mat(params.head_w1, fc.attn_out.data() + static_cast<std::size_t>(i) * width, h1);
        for (int k = 0; k < hidden; ++k) h1[k] = elu(h1[k] + params.head_b1[k]);
        double z2 = params.head_b2[0];
        for (int k = 0; k < hidden; ++k) z2 += params.head_w2.at(0, k) * h1[k];
        fc.yhat[i] = sigmoid(z2);
    }
}

}  // namespace

void GatDims::validate() const {
    if (input_dim < 1 || attention_layers < 1 || heads < 1 || units < 1 || head_hidden < 1)
        throw std::invalid_argument("predictor dimensions must be positive");
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
    if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
}

PredictorParams PredictorParams::init(const GatDims& dims, std::uint64_t seed) {
    dims.validate();
    PredictorParams p;
    p.dims = dims;
    SplitMix64 rng(derive_stream(seed, 0x6A7));
    auto glorot = [&](Mat& m) {
        const double lim = std::sqrt(6.0 / (m.rows + m.cols));
        for (double& w : m.a) w = rng.uniform(-lim, lim);
    };
    const int width = dims.embed_width();
    for (int l = 0; l < dims.attention_layers; ++l) {
        AttnLayerParams layer;
        layer.in_dim = l == 0 ? dims.input_dim : width;
        layer.average = l + 1 == dims.attention_layers;
        layer.out_dim = layer.average ? width : dims.units;
        for (int h = 0; h < dims.heads; ++h) {
            HeadParams hp;
            hp.w_src = Mat(layer.out_dim, layer.in_dim);
            hp.w_dst = Mat(layer.out_dim, layer.in_dim);
            glorot(hp.w_src);
            glorot(hp.w_dst);
            hp.attn.resize(layer.out_dim);
            const double lim = std::sqrt(6.0 / (layer.out_dim + 1));
            for (double& a : hp.attn) a = rng.uniform(-lim, lim);
            layer.heads.push_back(std::move(hp));
        }
        p.layers.push_back(std::move(layer));
    }
    p.head_w1 = Mat(dims.head_hidden, width);
    glorot(p.head_w1);
    p.head_b1.assign(dims.head_hidden, 0.0);
    p.head_w2 = Mat(1, dims.head_hidden);
    glorot(p.head_w2);
    p.head_b2.assign(1, 0.0);
    return p;
}

PredictorParams PredictorParams::zeros_like(const PredictorParams& src) {
    PredictorParams p;
    p.dims = src.dims;
    for (const auto& layer : src.layers) {
        AttnLayerParams zl;
        zl.in_dim = layer.in_dim;
        zl.out_dim = layer.out_dim;
        zl.average = layer.average;
        for (const auto& h : layer.heads) {
            HeadParams zh;
            zh.w_src = Mat(h.w_src.rows, h.w_src.cols);
            zh.w_dst = Mat(h.w_dst.rows, h.w_dst.cols);
            zh.attn.assign(h.attn.size(), 0.0);
            zl.heads.push_back(std::move(zh));
        }
        p.layers.push_back(std::move(zl));
    }
    p.head_w1 = Mat(src.head_w1.rows, src.head_w1.cols);
    p.head_b1.assign(src.head_b1.size(), 0.0);
    p.head_w2 = Mat(src.head_w2.rows, src.head_w2.cols);
    p.head_b2.assign(src.head_b2.size(), 0.0);
    return p;
}

std::vector<double*> PredictorParams::flat() {
    std::vector<double*> out;
    for (auto& layer : layers)
        for (auto& h : layer.heads) {
            for (auto& w : h.w_src.a) out.push_back(&w);
            for (auto& w : h.w_dst.a) out.push_back(&w);
            for (auto& w : h.attn) out.push_back(&w);
        }
    for (auto& w : head_w1.a) out.push_back(&w);
    for (auto& w : head_b1) out.push_back(&w);
    for (auto& w : head_w2.a) out.push_back(&w);
    for (auto& w : head_b2) out.push_back(&w);
    return out;
}

std::vector<const double*> PredictorParams::flat() const {
    auto mut = const_cast<PredictorParams*>(this)->flat();
    return {mut.begin(), mut.end()};
}

TrainGraph make_train_graph(const Graph& g, const InfluenceTable& influence,
                            std::span<const NodeFeature> features) {
    TrainGraph tg;
    tg.graph = &g;
    tg.features = node_features(g, features);
    for (NodeId v : influence.present_nodes())
        tg.labels.push_back({v, influence.value(v) / g.num_nodes()});
    return tg;
}

std::vector<double> forward(const PredictorParams& params, const Graph& g,
                            const NodeFeatures& x) {
    ForwardCache fc;
    run_forward(params, g, x, fc);
    return fc.yhat;
}

std::pair<double, PredictorParams> loss_and_gradients(const PredictorParams& params,
                                                      const Graph& g, const NodeFeatures& x,
                                                      std::span<const LabeledNode> batch) {
    if (batch.empty()) throw std::invalid_argument("training batch must be nonempty");
    ForwardCache fc;
    run_forward(params, g, x, fc);
    const NodeId n = g.num_nodes();

    double loss = 0.0;
    std::vector<double> dyhat(n, 0.0);
    for (const auto& s : batch) {
        const double diff = fc.yhat[s.node] - s.target;
        loss += diff * diff;
        dyhat[s.node] += 2.0 * diff / static_cast<double>(batch.size());
    }
    loss /= static_cast<double>(batch.size());

    PredictorParams grads = PredictorParams::zeros_like(params);
    const int width = params.head_w1.cols;
    const int hidden = params.head_w1.rows;

    // regression head backward
    std::vector<double> d_attn_out(static_cast<std::size_t>(n) * width, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        if (dyhat[i] == 0.0) continue;
        const double y = fc.yhat[i];
        const double dz2 = dyhat[i] * y * (1.0 - y);
        const double* h1 = fc.h1.data() + static_cast<std::size_t>(i) * hidden;
        const double* xin = fc.attn_out.data() + static_cast<std::size_t>(i) * width;
        grads.head_b2[0] += dz2;
        for (int k = 0; k < hidden; ++k) {
            grads.head_w2.at(0, k) += dz2 * h1[k];
            const double dz1 = dz2 * params.head_w2.at(0, k) * elu_grad_from_value(h1[k]);
            grads.head_b1[k] += dz1;
            double* gw1 = grads.head_w1.a.data() + static_cast<std::size_t>(k) * width;
            const double* w1 = params.head_w1.a.data() + static_cast<std::size_t>(k) * width;
            double* dout = d_attn_out.data() + static_cast<std::size_t>(i) * width;
            for (int c = 0; c < width; ++c) {
                gw1[c] += dz1 * xin[c];
                dout[c] += dz1 * w1[c];
            }
        }
    }

    // attention stack backward
    std::vector<double> d_out = std::move(d_attn_out);
    for (int l = static_cast<int>(params.layers.size()) - 1; l >= 0; --l) {
        const AttnLayerParams& layer = params.layers[l];
        AttnLayerParams& glayer = grads.layers[l];
        const LayerCache& lc = fc.layers[l];
        const int fin = layer.in_dim;
        const int fout = layer.out_dim;
        const int heads = static_cast<int>(layer.heads.size());
        const int lwidth = layer.average ? fout : fout * heads;

        // d_out currently holds dL/d(layer output after any ELU); undo the ELU
        if (l + 1 < static_cast<int>(params.layers.size())) {
            const std::vector<double>& post = fc.layers[l + 1].input;
            for (std::size_t idx = 0; idx < d_out.size(); ++idx)
                d_out[idx] *= elu_grad_from_value(post[idx]);
        }

        std::vector<double> d_in(static_cast<std::size_t>(n) * fin, 0.0);
        std::vector<double> du(static_cast<std::size_t>(n) * fout);
        std::vector<double> dv(static_cast<std::size_t>(n) * fout);
        std::vector<double> dalpha, de;

        for (int h = 0; h < heads; ++h) {
            const HeadParams& hp = layer.heads[h];
            HeadParams& gh = glayer.heads[h];
            const auto& u = lc.u[h];
            const auto& v = lc.v[h];
            const auto& alpha = lc.alpha[h];
            std::fill(du.begin(), du.end(), 0.0);
            std::fill(dv.begin(), dv.end(), 0.0);
            const double head_scale = layer.average ? 1.0 / heads : 1.0;

            for (NodeId i = 0; i < n; ++i) {
                const auto begin = fc.arcs.off[i], end = fc.arcs.off[i + 1];
                const double* doi = d_out.data() + static_cast<std::size_t>(i) * lwidth +
                                    (layer.average ? 0 : static_cast<std::size_t>(h) * fout);
                dalpha.assign(static_cast<std::size_t>(end - begin), 0.0);
                double asum = 0.0;
                for (auto k = begin; k < end; ++k) {
                    const NodeId j = fc.arcs.tgt[k];
                    const double* vj = v.data() + static_cast<std::size_t>(j) * fout;
                    double* dvj = dv.data() + static_cast<std::size_t>(j) * fout;
                    double acc = 0.0;
                    for (int f = 0; f < fout; ++f) {
                        const double go = head_scale * doi[f];
                        acc += go * vj[f];
                        dvj[f] += alpha[k] * go;
                    }
                    dalpha[k - begin] = acc;
                    asum += alpha[k] * acc;
                }
                const double* ui = u.data() + static_cast<std::size_t>(i) * fout;
                double* dui = du.data() + static_cast<std::size_t>(i) * fout;
                for (auto k = begin; k < end; ++k) {
                    const NodeId j = fc.arcs.tgt[k];
                    const double dek = alpha[k] * (dalpha[k - begin] - asum);
                    if (dek == 0.0) continue;
                    const double* vj = v.data() + static_cast<std::size_t>(j) * fout;
                    double* dvj = dv.data() + static_cast<std::size_t>(j) * fout;
                    for (int f = 0; f < fout; ++f) {
                        const double z = ui[f] + vj[f];
                        gh.attn[f] += dek * leaky(z);
                        const double dz = dek * hp.attn[f] * leaky_grad(z);
                        dui[f] += dz;
                        dvj[f] += dz;
                    }
                }
            }

            // dW_src += du^T X, dW_dst += dv^T X, dX += du W_src + dv W_dst
            for (NodeId i = 0; i < n; ++i) {
                const double* xi = lc.input.data() + static_cast<std::size_t>(i) * fin;
                const double* dui = du.data() + static_cast<std::size_t>(i) * fout;
                const double* dvi = dv.data() + static_cast<std::size_t>(i) * fout;
                double* dxi = d_in.data() + static_cast<std::size_t>(i) * fin;
                for (int f = 0; f < fout; ++f) {
                    const double a = dui[f], b = dvi[f];
                    double* gs = gh.w_src.a.data() + static_cast<std::size_t>(f) * fin;
                    double* gd = gh.w_dst.a.data() + static_cast<std::size_t>(f) * fin;
                    const double* ws = hp.w_src.a.data() + static_cast<std::size_t>(f) * fin;
                    const double* wd = hp.w_dst.a.data() + static_cast<std::size_t>(f) * fin;
                    for (int c = 0; c < fin; ++c) {
                        gs[c] += a * xi[c];
                        gd[c] += b * xi[c];
                        dxi[c] += a * ws[c] + b * wd[c];
                    }
                }
            }
        }
        d_out = std::move(d_in);
    }
    return {loss, std::move(grads)};
}

namespace {

class Adam {
public:
    Adam(std::size_t size, double lr) : lr_(lr), m_(size, 0.0), v_(size, 0.0) {}

    void step(std::vector<double*>& params, const std::vector<const double*>& grads) {
        ++t_;
        const double c1 = 1.0 - std::pow(beta1_, t_);
        const double c2 = 1.0 - std::pow(beta2_, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double g = *grads[i];
            m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
            v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
            *params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
        }
    }

private:
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    int t_ = 0;
    std::vector<double> m_, v_;
};

void train_epochs(PredictorParams& params, std::span<const TrainGraph> corpus,
                  const TrainConfig& cfg) {
    auto view = params.flat();
    Adam adam(view.size(), cfg.learning_rate);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const TrainGraph& tg : corpus) {
            auto [loss, grads] = loss_and_gradients(params, *tg.graph, tg.features, tg.labels);
            if (!std::isfinite(loss))
                throw NumericalError("training diverged: non-finite loss at epoch " +
                                     std::to_string(epoch));
            auto gview = static_cast<const PredictorParams&>(grads).flat();
            adam.step(view, gview);
        }
    }
}

void check_corpus(std::span<const TrainGraph> corpus, int input_dim) {
    if (corpus.empty()) throw std::invalid_argument("training corpus must be nonempty");
    for (const TrainGraph& tg : corpus) {
        if (tg.graph == nullptr) throw std::invalid_argument("corpus graph missing");
        if (tg.labels.empty()) throw std::invalid_argument("corpus graph has no labels");
        if (tg.features.dim != input_dim)
            throw std::invalid_argument("corpus feature width does not match input_dim");
    }
}

}  // namespace

PredictorParams pretrain(std::span<const TrainGraph> corpus, const GatDims& dims,
                         const TrainConfig& cfg) {
    cfg.validate();
    check_corpus(corpus, dims.input_dim);
    PredictorParams params = PredictorParams::init(dims, cfg.seed);
    train_epochs(params, corpus, cfg);
    return params;
}

PredictorParams finetune(const PredictorParams& params, const TrainGraph& target,
                         const TrainConfig& cfg) {
    cfg.validate();
    check_corpus({&target, 1}, params.dims.input_dim);
    PredictorParams tuned = params;
    train_epochs(tuned, {&target, 1}, cfg);
    return tuned;
}

InfluenceTable predict_influence(const PredictorParams& params, const Graph& g,
                                 const NodeFeatures& x, double beta_tag) {
    const auto frac = forward(params, g, x);
    InfluenceTable table(g.num_nodes(), Provenance::Predicted, beta_tag, 0);
    const double n = static_cast<double>(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        table.set(v, std::clamp(frac[v] * n, 1.0, n));
    return table;
}

}  // namespace alge
