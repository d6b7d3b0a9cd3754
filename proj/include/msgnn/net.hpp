#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "msgnn/chebyshev.hpp"
#include "msgnn/dense.hpp"
#include "msgnn/maglap.hpp"
#include "msgnn/metrics.hpp"
#include "msgnn/rng.hpp"

namespace msgnn {

// Passes z iff -pi/2 <= arg(z) < pi/2 (right half-plane including the
// negative imaginary axis); arg(0) is treated as 0, so sigma(0) = 0.
inline cplx complex_relu(cplx z) {
    if (z.real() > 0.0) return z;
    if (z.real() == 0.0 && z.imag() <= 0.0) return z;
    return cplx{};
}

inline bool complex_relu_passes(cplx z) {
    return z.real() > 0.0 || (z.real() == 0.0 && z.imag() <= 0.0);
}

// One spectral convolution layer at Chebyshev order K = 1:
//   sigma(X W_self + Ltil X W_neigh + B)
// with real weights acting on both parts and a bias added equally to the
// real and imaginary part of each row.
struct ChebConvLayer {
    RMat w_self;
    RMat w_neigh;
    std::vector<double> bias;
};

enum class TaskKind { node, link };

struct ModelConfig {
    TaskKind task = TaskKind::node;
    int in_dim = 4;
    int hidden = 16;
    int num_classes = 2;
    int num_layers = 2;
    double q = 0.0;

    index_t head_in() const { return (task == TaskKind::link ? 4 : 2) * hidden; }
};

struct MsgnnModel {
    ModelConfig config;
    std::vector<ChebConvLayer> layers;
    RMat head;                 // head_in x num_classes
    CsrMatrix<cplx> ltil;      // cached (2 / lambda_max) L - I
};

namespace detail {

inline RMat glorot(index_t rows, index_t cols, Rng& rng) {
    RMat w(rows, cols);
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : w.a) v = rng.uniform(-bound, bound);
    return w;
}

}  // namespace detail

inline MsgnnModel make_model(const ModelConfig& config, const HermitianMatrix& laplacian,
                             double lambda_max, std::uint64_t seed) {
    if (config.num_layers < 1) throw std::invalid_argument("make_model: need at least one layer");
    MsgnnModel model;
    model.config = config;
    model.ltil = scaled_laplacian(laplacian, lambda_max);
    Rng rng(seed);
    for (int l = 0; l < config.num_layers; ++l) {
        const index_t fin = l == 0 ? config.in_dim : config.hidden;
        const index_t fout = config.hidden;
        ChebConvLayer layer;
        layer.w_self = detail::glorot(fin, fout, rng);
        layer.w_neigh = detail::glorot(fin, fout, rng);
        layer.bias.assign(static_cast<std::size_t>(fout), 0.0);
        model.layers.push_back(std::move(layer));
    }
    model.head = detail::glorot(config.head_in(), config.num_classes, rng);
    return model;
}

inline CMat layer_preactivation(const ChebConvLayer& layer, const CsrMatrix<cplx>& ltil, const CMat& x) {
    if (x.cols != layer.w_self.rows) throw std::invalid_argument("layer_forward: shape mismatch");
    CMat pre = matmul(x, layer.w_self);
    const CMat neigh = matmul(spmm(ltil, x), layer.w_neigh);
    for (std::size_t k = 0; k < pre.a.size(); ++k) pre.a[k] += neigh.a[k];
    const cplx one_one(1.0, 1.0);
    for (index_t i = 0; i < pre.rows; ++i)
        for (index_t j = 0; j < pre.cols; ++j) pre(i, j) += one_one * layer.bias[static_cast<std::size_t>(j)];
    return pre;
}

inline CMat layer_forward(const ChebConvLayer& layer, const CsrMatrix<cplx>& ltil, const CMat& x) {
    CMat pre = layer_preactivation(layer, ltil, x);
    for (cplx& v : pre.a) v = complex_relu(v);
    return pre;
}

// n x F complex -> n x 2F real, real parts then imaginary parts.
inline RMat unwind(const CMat& x) {
    RMat out(x.rows, 2 * x.cols);
    for (index_t i = 0; i < x.rows; ++i)
        for (index_t j = 0; j < x.cols; ++j) {
            out(i, j) = x(i, j).real();
            out(i, x.cols + j) = x(i, j).imag();
        }
    return out;
}

inline void softmax_rows(RMat& x) {
    for (index_t i = 0; i < x.rows; ++i) {
        double mx = x(i, 0);
        for (index_t j = 1; j < x.cols; ++j) mx = std::max(mx, x(i, j));
        double sum = 0.0;
        for (index_t j = 0; j < x.cols; ++j) {
            x(i, j) = std::exp(x(i, j) - mx);
            sum += x(i, j);
        }
        const double inv = 1.0 / sum;
        for (index_t j = 0; j < x.cols; ++j) x(i, j) *= inv;
    }
}

using NodePair = std::pair<index_t, index_t>;

namespace detail {

struct ForwardCache {
    std::vector<CMat> inputs;   // X^(l-1) per layer
    std::vector<CMat> neigh;    // Ltil X^(l-1) per layer
    std::vector<CMat> pre;      // pre-activation per layer
    CMat last;                  // X^(L)
    RMat unwound;               // n x 2F
    RMat head_in;               // rows of the linear head (node rows or pair rows)
    RMat probs;
};

inline void forward_pass(const MsgnnModel& model, const RMat& x0, const std::vector<NodePair>* pairs,
                         ForwardCache& cache) {
    if (x0.rows != model.ltil.rows) throw std::invalid_argument("forward: feature row count != graph size");
    if ((pairs != nullptr) != (model.config.task == TaskKind::link))
        throw std::invalid_argument("forward: pair list and task kind disagree");
    CMat x = complexify(x0);
    for (const ChebConvLayer& layer : model.layers) {
        cache.inputs.push_back(x);
        CMat neigh = spmm(model.ltil, x);
        CMat pre = matmul(x, layer.w_self);
        {
            const CMat nw = matmul(neigh, layer.w_neigh);
            for (std::size_t k = 0; k < pre.a.size(); ++k) pre.a[k] += nw.a[k];
        }
        const cplx one_one(1.0, 1.0);
        for (index_t i = 0; i < pre.rows; ++i)
            for (index_t j = 0; j < pre.cols; ++j) pre(i, j) += one_one * layer.bias[static_cast<std::size_t>(j)];
        cache.neigh.push_back(std::move(neigh));
        x = pre;
        for (cplx& v : x.a) v = complex_relu(v);
        cache.pre.push_back(std::move(pre));
    }
    cache.last = std::move(x);
    cache.unwound = unwind(cache.last);

    if (model.config.task == TaskKind::link) {
        const index_t w = cache.unwound.cols;
        cache.head_in = RMat(static_cast<index_t>(pairs->size()), 2 * w);
        for (std::size_t t = 0; t < pairs->size(); ++t) {
            const auto& [a, b] = (*pairs)[t];
            if (a < 0 || a >= cache.unwound.rows || b < 0 || b >= cache.unwound.rows)
                throw std::out_of_range("forward: pair node index out of range");
            for (index_t j = 0; j < w; ++j) {
                cache.head_in(static_cast<index_t>(t), j) = cache.unwound(a, j);
                cache.head_in(static_cast<index_t>(t), w + j) = cache.unwound(b, j);
            }
        }
    } else {
        cache.head_in = cache.unwound;
    }
    cache.probs = matmul(cache.head_in, model.head);
    softmax_rows(cache.probs);
}

}  // namespace detail

// Class probabilities: one row per node (node task) or per queried pair
// (link task); rows sum to one.
inline RMat forward(const MsgnnModel& model, const RMat& x0, const std::vector<NodePair>* pairs = nullptr) {
    detail::ForwardCache cache;
    detail::forward_pass(model, x0, pairs, cache);
    return std::move(cache.probs);
}

struct LayerGrads {
    RMat w_self;
    RMat w_neigh;
    std::vector<double> bias;
};

struct Gradients {
    std::vector<LayerGrads> layers;
    RMat head;
};

// One training batch: for node tasks `rows` indexes nodes, for link tasks it
// indexes the pair list. Labels align with `rows`.
struct Batch {
    const std::vector<NodePair>* pairs = nullptr;
    std::vector<index_t> rows;
    std::vector<int> labels;
};

struct LossResult {
    double loss = 0.0;
    double batch_accuracy = 0.0;
    Gradients grads;
};

// Mean cross-entropy over the batch plus reverse-mode gradients for every
// parameter. Weight decay is not part of the loss; the optimizer adds it.
inline LossResult loss_and_grad(const MsgnnModel& model, const RMat& x0, const Batch& batch) {
    if (batch.rows.size() != batch.labels.size()) throw std::invalid_argument("loss_and_grad: label count mismatch");
    if (batch.rows.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
    detail::ForwardCache cache;
    detail::forward_pass(model, x0, batch.pairs, cache);

    const index_t c = model.config.num_classes;
    const double inv_b = 1.0 / static_cast<double>(batch.rows.size());
    double loss = 0.0;
    std::size_t hits = 0;
    RMat g_logits(cache.probs.rows, c);
    for (std::size_t t = 0; t < batch.rows.size(); ++t) {
        const index_t row = batch.rows[t];
        const int label = batch.labels[t];
        if (row < 0 || row >= cache.probs.rows) throw std::out_of_range("loss_and_grad: batch row out of range");
        if (label < 0 || label >= c) throw std::invalid_argument("loss_and_grad: label out of range");
        loss -= std::log(std::max(cache.probs(row, label), 1e-300)) * inv_b;
        int arg = 0;
        for (index_t j = 1; j < c; ++j)
            if (cache.probs(row, j) > cache.probs(row, arg)) arg = static_cast<int>(j);
        if (arg == label) ++hits;
        for (index_t j = 0; j < c; ++j) g_logits(row, j) += cache.probs(row, j) * inv_b;
        g_logits(row, label) -= inv_b;
    }

    LossResult out;
    out.loss = loss;
    out.batch_accuracy = static_cast<double>(hits) / static_cast<double>(batch.rows.size());
    out.grads.head = transpose_matmul(cache.head_in, g_logits);
    RMat g_head_in = matmul_transposed(g_logits, model.head);

    // collapse pair rows back onto node rows
    RMat g_unwound(cache.unwound.rows, cache.unwound.cols);
    if (model.config.task == TaskKind::link) {
        const index_t w = cache.unwound.cols;
        for (std::size_t t = 0; t < batch.pairs->size(); ++t) {
            const auto& [a, b] = (*batch.pairs)[t];
            for (index_t j = 0; j < w; ++j) {
                g_unwound(a, j) += g_head_in(static_cast<index_t>(t), j);
                g_unwound(b, j) += g_head_in(static_cast<index_t>(t), w + j);
            }
        }
    } else {
        g_unwound = std::move(g_head_in);
    }

    const index_t f_last = cache.last.cols;
    CMat g_x(cache.last.rows, f_last);
    for (index_t i = 0; i < g_x.rows; ++i)
        for (index_t j = 0; j < f_last; ++j)
            g_x(i, j) = cplx(g_unwound(i, j), g_unwound(i, f_last + j));

    out.grads.layers.resize(model.layers.size());
    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const ChebConvLayer& layer = model.layers[l];
        // complex ReLU: identity on the pass region, zero elsewhere, with the
        // real and imaginary parts treated as independent reals
        CMat g_pre = std::move(g_x);
        for (std::size_t k = 0; k < g_pre.a.size(); ++k)
            if (!complex_relu_passes(cache.pre[l].a[k])) g_pre.a[k] = cplx{};

        LayerGrads& lg = out.grads.layers[l];
        lg.w_self = real_adjoint_product(cache.inputs[l], g_pre);
        lg.w_neigh = real_adjoint_product(cache.neigh[l], g_pre);
        lg.bias.assign(static_cast<std::size_t>(layer.w_self.cols), 0.0);
        for (index_t i = 0; i < g_pre.rows; ++i)
            for (index_t j = 0; j < g_pre.cols; ++j)
                lg.bias[static_cast<std::size_t>(j)] += g_pre(i, j).real() + g_pre(i, j).imag();

        if (l > 0) {
            // dX = G W_self^T + Ltil (G W_neigh^T); Ltil is Hermitian so its
            // adjoint is itself
            CMat g_in = matmul_transposed(g_pre, layer.w_self);
            const CMat g_neigh = spmm(model.ltil, matmul_transposed(g_pre, layer.w_neigh));
            for (std::size_t k = 0; k < g_in.a.size(); ++k) g_in.a[k] += g_neigh.a[k];
            g_x = std::move(g_in);
        }
    }
    return out;
}

// Adam with the L2 term added to the gradient inside the update; the decay
// applies to weight matrices only, never biases.
struct AdamState {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 5e-4;
    std::int64_t t = 0;

    struct Moments {
        std::vector<double> m, v;
    };
    std::vector<Moments> slots;

    static AdamState for_model(const MsgnnModel& model) {
        AdamState s;
        for (const ChebConvLayer& layer : model.layers) {
            s.slots.push_back({std::vector<double>(layer.w_self.a.size(), 0.0),
                               std::vector<double>(layer.w_self.a.size(), 0.0)});
            s.slots.push_back({std::vector<double>(layer.w_neigh.a.size(), 0.0),
                               std::vector<double>(layer.w_neigh.a.size(), 0.0)});
            s.slots.push_back({std::vector<double>(layer.bias.size(), 0.0),
                               std::vector<double>(layer.bias.size(), 0.0)});
        }
        s.slots.push_back({std::vector<double>(model.head.a.size(), 0.0),
                           std::vector<double>(model.head.a.size(), 0.0)});
        return s;
    }

    void step(MsgnnModel& model, const Gradients& grads) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        std::size_t slot = 0;
        auto update = [&](double* param, const double* grad, std::size_t len, bool decay) {
            Moments& mo = slots[slot++];
            for (std::size_t k = 0; k < len; ++k) {
                const double g = grad[k] + (decay ? weight_decay * param[k] : 0.0);
                mo.m[k] = beta1 * mo.m[k] + (1.0 - beta1) * g;
                mo.v[k] = beta2 * mo.v[k] + (1.0 - beta2) * g * g;
                param[k] -= lr * (mo.m[k] / bc1) / (std::sqrt(mo.v[k] / bc2) + eps);
            }
        };
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            update(model.layers[l].w_self.a.data(), grads.layers[l].w_self.a.data(),
                   model.layers[l].w_self.a.size(), true);
            update(model.layers[l].w_neigh.a.data(), grads.layers[l].w_neigh.a.data(),
                   model.layers[l].w_neigh.a.size(), true);
            update(model.layers[l].bias.data(), grads.layers[l].bias.data(), model.layers[l].bias.size(), false);
        }
        update(model.head.a.data(), grads.head.a.data(), model.head.a.size(), true);
    }
};

// Flat views over every trainable parameter, used by the optimizer-free
// paths (gradient checks, checkpoints).
struct ParamView {
    std::string name;
    double* data;
    std::size_t size;
};

inline std::vector<ParamView> parameter_views(MsgnnModel& model) {
    std::vector<ParamView> views;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const std::string base = "layer" + std::to_string(l);
        views.push_back({base + ".w_self", model.layers[l].w_self.a.data(), model.layers[l].w_self.a.size()});
        views.push_back({base + ".w_neigh", model.layers[l].w_neigh.a.data(), model.layers[l].w_neigh.a.size()});
        views.push_back({base + ".bias", model.layers[l].bias.data(), model.layers[l].bias.size()});
    }
    views.push_back({"head", model.head.a.data(), model.head.a.size()});
    return views;
}

inline std::vector<const double*> gradient_pointers(const Gradients& grads) {
    std::vector<const double*> ptrs;
    for (const LayerGrads& lg : grads.layers) {
        ptrs.push_back(lg.w_self.a.data());
        ptrs.push_back(lg.w_neigh.a.data());
        ptrs.push_back(lg.bias.data());
    }
    ptrs.push_back(grads.head.a.data());
    return ptrs;
}

struct TrainHistory {
    std::vector<double> loss;
    std::vector<double> metric;  // train accuracy (link) or validation ARI (cluster)
    int best_epoch = -1;
};

// Full-batch training for the fixed-epoch link protocol.
inline TrainHistory train_link(MsgnnModel& model, const RMat& x0, const Batch& batch, int epochs = 300,
                               AdamState* optimizer = nullptr) {
    AdamState local = AdamState::for_model(model);
    AdamState& opt = optimizer ? *optimizer : local;
    TrainHistory history;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        LossResult res = loss_and_grad(model, x0, batch);
        opt.step(model, res.grads);
        history.loss.push_back(res.loss);
        history.metric.push_back(res.batch_accuracy);
    }
    history.best_epoch = epochs - 1;
    return history;
}

inline std::vector<int> argmax_rows(const RMat& probs) {
    std::vector<int> labels(static_cast<std::size_t>(probs.rows), 0);
    for (index_t i = 0; i < probs.rows; ++i) {
        int arg = 0;
        for (index_t j = 1; j < probs.cols; ++j)
            if (probs(i, j) > probs(i, arg)) arg = static_cast<int>(j);
        labels[static_cast<std::size_t>(i)] = arg;
    }
    return labels;
}

// Semi-supervised clustering: cross-entropy on the seed nodes, early stopping
// on validation ARI with the given patience, best parameters restored.
inline TrainHistory train_cluster(MsgnnModel& model, const RMat& x0, const Batch& seed_batch,
                                  const std::vector<index_t>& val_nodes, const std::vector<int>& val_truth,
                                  int max_epochs = 1000, int patience = 200) {
    AdamState opt = AdamState::for_model(model);
    TrainHistory history;
    double best_ari = -2.0;
    int since_best = 0;
    std::vector<std::vector<double>> best_params;
    const auto views = parameter_views(model);

    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        LossResult res = loss_and_grad(model, x0, seed_batch);
        opt.step(model, res.grads);

        const RMat probs = forward(model, x0);
        const std::vector<int> pred = argmax_rows(probs);
        std::vector<int> val_pred, val_true;
        val_pred.reserve(val_nodes.size());
        val_true.reserve(val_nodes.size());
        for (std::size_t k = 0; k < val_nodes.size(); ++k) {
            val_pred.push_back(pred[static_cast<std::size_t>(val_nodes[k])]);
            val_true.push_back(val_truth[k]);
        }
        const double val_ari = ari(val_pred, val_true);
        history.loss.push_back(res.loss);
        history.metric.push_back(val_ari);

        if (val_ari > best_ari) {
            best_ari = val_ari;
            history.best_epoch = epoch;
            since_best = 0;
            best_params.clear();
            for (const ParamView& v : views) best_params.emplace_back(v.data, v.data + v.size);
        } else if (++since_best >= patience) {
            break;
        }
    }
    if (!best_params.empty())
        for (std::size_t i = 0; i < views.size(); ++i)
            std::copy(best_params[i].begin(), best_params[i].end(), views[i].data);
    return history;
}

}  // namespace msgnn
