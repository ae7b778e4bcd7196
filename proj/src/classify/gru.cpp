// SPDX-License-Identifier: Apache-2.0
#include "cbosel/gru.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbosel/kernels.hpp"

namespace cbosel {

namespace {

double sigmoid(double a) {
    if (a >= 0.0) {
        return 1.0 / (1.0 + std::exp(-a));
    }
    const double e = std::exp(a);
    return e / (1.0 + e);
}

// log Σ exp(logits) − logits[label]
double cross_entropy(std::span<const double> logits, std::size_t label) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) {
        sum += std::exp(v - top);
    }
    return std::log(sum) + top - logits[label];
}

std::vector<double> forward_logits(std::span<const double> sample, const GruParameters& params,
                                   std::vector<GruStepCache>* caches) {
    if (sample.size() != params.feature_count) {
        throw std::invalid_argument("sample has " + std::to_string(sample.size()) + " features, model expects " +
                                    std::to_string(params.feature_count));
    }
    std::vector<double> h(params.hidden, 0.0);
    for (auto& step : chunk_sequence(sample, params.step_dim)) {
        auto cache = gru_cell_forward(step, h, params);
        h = cache.hidden;
        if (caches) {
            caches->push_back(std::move(cache));
        }
    }
    std::vector<double> logits = params.b_out;
    kernels::gemv_acc(params.w_out, params.classes, params.hidden, h, logits);
    return logits;
}

void reshape_like(GruParameters& grad, const GruParameters& params) {
    if (grad.feature_count != params.feature_count || grad.step_dim != params.step_dim ||
        grad.hidden != params.hidden || grad.classes != params.classes) {
        grad = GruParameters::zeros(params.feature_count, params.step_dim, params.hidden, params.classes);
        return;
    }
    for (auto t : grad.tensors()) {
        std::fill(t.begin(), t.end(), 0.0);
    }
}

} // namespace

GruParameters GruParameters::zeros(std::size_t feature_count, std::size_t step_dim, std::size_t hidden,
                                   std::size_t classes) {
    if (feature_count == 0 || step_dim == 0 || hidden == 0 || classes == 0) {
        throw ConfigError("GRU dimensions must be positive");
    }
    GruParameters p;
    p.feature_count = feature_count;
    p.step_dim = step_dim;
    p.hidden = hidden;
    p.classes = classes;
    for (auto* w : {&p.w_update, &p.w_reset, &p.w_candidate}) {
        w->assign(hidden * step_dim, 0.0);
    }
    for (auto* u : {&p.u_update, &p.u_reset, &p.u_candidate}) {
        u->assign(hidden * hidden, 0.0);
    }
    for (auto* b : {&p.b_update, &p.b_reset, &p.b_candidate}) {
        b->assign(hidden, 0.0);
    }
    p.w_out.assign(classes * hidden, 0.0);
    p.b_out.assign(classes, 0.0);
    return p;
}

std::array<std::span<double>, 11> GruParameters::tensors() {
    return {w_update, w_reset, w_candidate, u_update, u_reset, u_candidate,
            b_update, b_reset, b_candidate, w_out,    b_out};
}

std::array<std::span<const double>, 11> GruParameters::tensors() const {
    return {w_update, w_reset, w_candidate, u_update, u_reset, u_candidate,
            b_update, b_reset, b_candidate, w_out,    b_out};
}

GruStepCache gru_cell_forward(std::span<const double> input, std::span<const double> h_prev,
                              const GruParameters& params) {
    const std::size_t hdim = params.hidden;
    const std::size_t xdim = params.step_dim;
    if (input.size() != xdim || h_prev.size() != hdim) {
        throw std::invalid_argument("GRU cell input or state has the wrong size");
    }
    for (double v : input) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("GRU cell input is not finite");
        }
    }

    GruStepCache c;
    c.input.assign(input.begin(), input.end());
    c.h_prev.assign(h_prev.begin(), h_prev.end());

    c.update = params.b_update;
    kernels::gemv_acc(params.w_update, hdim, xdim, input, c.update);
    kernels::gemv_acc(params.u_update, hdim, hdim, h_prev, c.update);

    c.reset = params.b_reset;
    kernels::gemv_acc(params.w_reset, hdim, xdim, input, c.reset);
    kernels::gemv_acc(params.u_reset, hdim, hdim, h_prev, c.reset);

    std::vector<double> gated(hdim);
    for (std::size_t i = 0; i < hdim; ++i) {
        c.update[i] = sigmoid(c.update[i]);
        c.reset[i] = sigmoid(c.reset[i]);
        gated[i] = h_prev[i] * c.reset[i];
    }

    c.candidate = params.b_candidate;
    kernels::gemv_acc(params.w_candidate, hdim, xdim, input, c.candidate);
    kernels::gemv_acc(params.u_candidate, hdim, hdim, gated, c.candidate);

    c.hidden.resize(hdim);
    for (std::size_t i = 0; i < hdim; ++i) {
        c.candidate[i] = std::tanh(c.candidate[i]);
        c.hidden[i] = (1.0 - c.update[i]) * c.candidate[i] + c.update[i] * h_prev[i];
    }
    return c;
}

std::vector<std::vector<double>> chunk_sequence(std::span<const double> sample, std::size_t chunk) {
    if (chunk == 0) {
        throw ConfigError("chunk size must be positive");
    }
    if (sample.empty()) {
        throw std::invalid_argument("cannot build a sequence from an empty sample");
    }
    std::vector<std::vector<double>> steps;
    for (std::size_t start = 0; start < sample.size(); start += chunk) {
        std::vector<double> step(chunk, 0.0);
        const std::size_t n = std::min(chunk, sample.size() - start);
        std::copy_n(sample.begin() + static_cast<std::ptrdiff_t>(start), n, step.begin());
        steps.push_back(std::move(step));
    }
    return steps;
}

Prediction forward_sequence(std::span<const double> sample, const GruParameters& params,
                            std::vector<GruStepCache>* caches) {
    Prediction p;
    p.probabilities = forward_logits(sample, params, caches);
    softmax(p.probabilities);
    p.label = argmax(p.probabilities);
    return p;
}

double gru_loss_and_gradients(const GruParameters& params, const LabeledDataset& data,
                              std::span<const std::size_t> rows, GruParameters& grad) {
    if (rows.empty()) {
        throw std::invalid_argument("empty batch");
    }
    reshape_like(grad, params);
    const std::size_t hdim = params.hidden;
    const double inv_batch = 1.0 / static_cast<double>(rows.size());

    std::vector<GruStepCache> caches;
    std::vector<double> dh(hdim);
    std::vector<double> dh_prev(hdim);
    std::vector<double> d_update(hdim), d_reset(hdim), d_candidate(hdim), d_gated(hdim), gated(hdim);
    double loss = 0.0;

    for (auto row : rows) {
        const std::size_t label = data.labels[row];
        if (label >= params.classes) {
            throw std::invalid_argument("label out of range in row " + std::to_string(row));
        }
        caches.clear();
        auto logits = forward_logits(data.row(row), params, &caches);
        loss += cross_entropy(logits, label);

        // dL/dlogits = softmax − onehot, scaled for the batch mean.
        softmax(logits);
        logits[label] -= 1.0;
        for (double& v : logits) {
            v *= inv_batch;
        }
        const auto& h_last = caches.back().hidden;
        kernels::ger(1.0, logits, h_last, grad.w_out);
        kernels::axpy(1.0, logits, grad.b_out);
        std::fill(dh.begin(), dh.end(), 0.0);
        kernels::gemv_t_acc(params.w_out, params.classes, hdim, logits, dh);

        for (auto it = caches.rbegin(); it != caches.rend(); ++it) {
            const auto& c = *it;
            for (std::size_t i = 0; i < hdim; ++i) {
                const double z = c.update[i];
                const double cand = c.candidate[i];
                d_candidate[i] = dh[i] * (1.0 - z) * (1.0 - cand * cand);
                d_update[i] = dh[i] * (c.h_prev[i] - cand) * z * (1.0 - z);
                dh_prev[i] = dh[i] * z;
                gated[i] = c.h_prev[i] * c.reset[i];
            }

            kernels::ger(1.0, d_candidate, c.input, grad.w_candidate);
            kernels::ger(1.0, d_candidate, gated, grad.u_candidate);
            kernels::axpy(1.0, d_candidate, grad.b_candidate);
            std::fill(d_gated.begin(), d_gated.end(), 0.0);
            kernels::gemv_t_acc(params.u_candidate, hdim, hdim, d_candidate, d_gated);

            for (std::size_t i = 0; i < hdim; ++i) {
                const double r = c.reset[i];
                d_reset[i] = d_gated[i] * c.h_prev[i] * r * (1.0 - r);
                dh_prev[i] += d_gated[i] * r;
            }

            kernels::ger(1.0, d_reset, c.input, grad.w_reset);
            kernels::ger(1.0, d_reset, c.h_prev, grad.u_reset);
            kernels::axpy(1.0, d_reset, grad.b_reset);
            kernels::gemv_t_acc(params.u_reset, hdim, hdim, d_reset, dh_prev);

            kernels::ger(1.0, d_update, c.input, grad.w_update);
            kernels::ger(1.0, d_update, c.h_prev, grad.u_update);
            kernels::axpy(1.0, d_update, grad.b_update);
            kernels::gemv_t_acc(params.u_update, hdim, hdim, d_update, dh_prev);

            dh.swap(dh_prev);
        }
    }
    loss *= inv_batch;
    if (!std::isfinite(loss)) {
        throw DivergenceError("non-finite GRU loss");
    }
    return loss;
}

GruParameters init_gru(std::size_t feature_count, std::size_t classes, const TrainConfig& config) {
    config.validate();
    const std::size_t step = config.chunk_size.value_or(feature_count);
    auto p = GruParameters::zeros(feature_count, step, config.hidden_dim, classes);
    Rng rng(config.seed);
    for (auto* w : {&p.w_update, &p.w_reset, &p.w_candidate}) {
        init_uniform(*w, step, rng);
    }
    for (auto* u : {&p.u_update, &p.u_reset, &p.u_candidate}) {
        init_uniform(*u, config.hidden_dim, rng);
    }
    init_uniform(p.w_out, config.hidden_dim, rng);
    return p;
}

GruParameters train_gru(const LabeledDataset& train, const TrainConfig& config, std::vector<double>* epoch_loss) {
    if (train.rows == 0 || train.cols == 0) {
        throw std::invalid_argument("cannot train on an empty split");
    }
    auto params = init_gru(train.cols, train.class_count(), config);
    momentum_sgd(
        params, train.rows, config,
        [&train](const GruParameters& p, std::span<const std::size_t> rows, GruParameters& g) {
            return gru_loss_and_gradients(p, train, rows, g);
        },
        epoch_loss);
    return params;
}

std::vector<Prediction> predict_gru(const GruParameters& params, const LabeledDataset& data) {
    if (data.cols != params.feature_count) {
        throw std::invalid_argument("dataset has " + std::to_string(data.cols) + " columns, model was trained on " +
                                    std::to_string(params.feature_count));
    }
    std::vector<Prediction> out;
    out.reserve(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
        out.push_back(forward_sequence(data.row(i), params));
    }
    return out;
}

} // namespace cbosel
