// SPDX-License-Identifier: Apache-2.0
#include "cbosel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbosel/kernels.hpp"

namespace cbosel {

std::size_t knn_classify(const LabeledDataset& train, std::span<const double> query, std::size_t k) {
    if (k == 0) {
        throw ConfigError("k must be at least 1");
    }
    if (train.rows == 0) {
        throw std::invalid_argument("KNN needs a nonempty training split");
    }
    if (query.size() != train.cols) {
        throw std::invalid_argument("query has the wrong number of features");
    }
    k = std::min(k, train.rows);

    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    for (std::size_t i = 0; i < train.rows; ++i) {
        dist[i] = {kernels::squared_distance(train.row(i), query), i};
    }
    // Pair ordering breaks distance ties by lower row index.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<std::size_t> votes(std::max<std::size_t>(train.class_count(), 1), 0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto label = train.labels[dist[j].second];
        if (label >= votes.size()) {
            votes.resize(label + 1, 0);
        }
        ++votes[label];
    }
    return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<std::size_t> knn_predict(const LabeledDataset& train, const LabeledDataset& queries, std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(queries.rows);
    for (std::size_t i = 0; i < queries.rows; ++i) {
        out.push_back(knn_classify(train, queries.row(i), k));
    }
    return out;
}

// --- one-hidden-layer network --------------------------------------------------

NnParameters NnParameters::zeros(std::size_t inputs, std::size_t hidden, std::size_t classes) {
    if (inputs == 0 || hidden == 0 || classes == 0) {
        throw ConfigError("network dimensions must be positive");
    }
    NnParameters p;
    p.inputs = inputs;
    p.hidden = hidden;
    p.classes = classes;
    p.w_hidden.assign(hidden * inputs, 0.0);
    p.b_hidden.assign(hidden, 0.0);
    p.w_out.assign(classes * hidden, 0.0);
    p.b_out.assign(classes, 0.0);
    return p;
}

std::array<std::span<double>, 4> NnParameters::tensors() { return {w_hidden, b_hidden, w_out, b_out}; }

std::array<std::span<const double>, 4> NnParameters::tensors() const { return {w_hidden, b_hidden, w_out, b_out}; }

namespace {

std::vector<double> hidden_activations(std::span<const double> sample, const NnParameters& p) {
    if (sample.size() != p.inputs) {
        throw std::invalid_argument("sample has the wrong number of features for this network");
    }
    std::vector<double> h = p.b_hidden;
    kernels::gemv_acc(p.w_hidden, p.hidden, p.inputs, sample, h);
    for (double& v : h) {
        v = std::tanh(v);
    }
    return h;
}

std::vector<double> output_logits(std::span<const double> h, const NnParameters& p) {
    std::vector<double> logits = p.b_out;
    kernels::gemv_acc(p.w_out, p.classes, p.hidden, h, logits);
    return logits;
}

} // namespace

Prediction nn_forward(std::span<const double> sample, const NnParameters& params) {
    Prediction pred;
    pred.probabilities = output_logits(hidden_activations(sample, params), params);
    softmax(pred.probabilities);
    pred.label = argmax(pred.probabilities);
    return pred;
}

double nn_loss_and_gradients(const NnParameters& params, const LabeledDataset& data, std::span<const std::size_t> rows,
                             NnParameters& grad) {
    if (rows.empty()) {
        throw std::invalid_argument("empty batch");
    }
    if (grad.inputs != params.inputs || grad.hidden != params.hidden || grad.classes != params.classes) {
        grad = NnParameters::zeros(params.inputs, params.hidden, params.classes);
    } else {
        for (auto t : grad.tensors()) {
            std::fill(t.begin(), t.end(), 0.0);
        }
    }
    const double inv_batch = 1.0 / static_cast<double>(rows.size());
    std::vector<double> dh(params.hidden);
    double loss = 0.0;
    for (auto row : rows) {
        const auto label = data.labels[row];
        if (label >= params.classes) {
            throw std::invalid_argument("label out of range in row " + std::to_string(row));
        }
        const auto x = data.row(row);
        const auto h = hidden_activations(x, params);
        auto logits = output_logits(h, params);
        const double top = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double v : logits) {
            sum += std::exp(v - top);
        }
        loss += std::log(sum) + top - logits[label];

        softmax(logits);
        logits[label] -= 1.0;
        for (double& v : logits) {
            v *= inv_batch;
        }
        kernels::ger(1.0, logits, h, grad.w_out);
        kernels::axpy(1.0, logits, grad.b_out);
        std::fill(dh.begin(), dh.end(), 0.0);
        kernels::gemv_t_acc(params.w_out, params.classes, params.hidden, logits, dh);
        for (std::size_t i = 0; i < params.hidden; ++i) {
            dh[i] *= 1.0 - h[i] * h[i];
        }
        kernels::ger(1.0, dh, x, grad.w_hidden);
        kernels::axpy(1.0, dh, grad.b_hidden);
    }
    loss *= inv_batch;
    if (!std::isfinite(loss)) {
        throw DivergenceError("non-finite network loss");
    }
    return loss;
}

NnParameters init_nn(std::size_t inputs, std::size_t classes, const TrainConfig& config) {
    config.validate();
    auto p = NnParameters::zeros(inputs, config.hidden_dim, classes);
    Rng rng(config.seed);
    init_uniform(p.w_hidden, inputs, rng);
    init_uniform(p.w_out, config.hidden_dim, rng);
    return p;
}

NnParameters train_nn(const LabeledDataset& train, const TrainConfig& config, std::vector<double>* epoch_loss) {
    if (train.rows == 0 || train.cols == 0) {
        throw std::invalid_argument("cannot train on an empty split");
    }
    auto params = init_nn(train.cols, train.class_count(), config);
    momentum_sgd(
        params, train.rows, config,
        [&train](const NnParameters& p, std::span<const std::size_t> rows, NnParameters& g) {
            return nn_loss_and_gradients(p, train, rows, g);
        },
        epoch_loss);
    return params;
}

std::vector<Prediction> predict_nn(const NnParameters& params, const LabeledDataset& data) {
    if (data.cols != params.inputs) {
        throw std::invalid_argument("dataset has " + std::to_string(data.cols) + " columns, network expects " +
                                    std::to_string(params.inputs));
    }
    std::vector<Prediction> out;
    out.reserve(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
        out.push_back(nn_forward(data.row(i), params));
    }
    return out;
}

} // namespace cbosel
