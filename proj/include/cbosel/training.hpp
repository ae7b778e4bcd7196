// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared training machinery for the gradient-trained classifiers: config,
// softmax output, and mini-batch momentum SGD with global-norm clipping.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cbosel/errors.hpp"
#include "cbosel/random.hpp"

namespace cbosel {

struct TrainConfig {
    std::size_t hidden_dim = 32;
    std::size_t epochs = 60;
    std::size_t batch_size = 32;
    double learning_rate = 0.01;
    double momentum = 0.9;
    double clip_norm = 5.0;
    /// Features per GRU timestep; unset feeds the whole vector as one step.
    std::optional<std::size_t> chunk_size;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Prediction {
    std::vector<double> probabilities;
    std::size_t label = 0;
};

/// In-place numerically stable softmax.
void softmax(std::span<double> logits);

/// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> values);

/// Uniform ±sqrt(1/fan_in) fill.
void init_uniform(std::span<double> values, std::size_t fan_in, Rng& rng);

namespace detail {

template <typename Params>
Params zeros_like(const Params& params) {
    Params out = params;
    for (auto t : out.tensors()) {
        std::fill(t.begin(), t.end(), 0.0);
    }
    return out;
}

} // namespace detail

/// Mini-batch momentum SGD. `grad_fn(params, rows, grad)` must overwrite
/// `grad` with the mean-loss gradient over `rows` and return the mean loss.
/// Params exposes tensors() returning spans over every trainable array.
/// Throws DivergenceError (1-based epoch) on a non-finite loss.
template <typename Params, typename GradFn>
void momentum_sgd(Params& params, std::size_t rows, const TrainConfig& config, GradFn&& grad_fn,
                  std::vector<double>* epoch_loss = nullptr) {
    config.validate();
    if (rows == 0) {
        throw std::invalid_argument("cannot train on an empty split");
    }
    Rng rng(mix_seed(config.seed ^ 0x5ca1ab1eULL));
    Params grad = detail::zeros_like(params);
    Params velocity = detail::zeros_like(params);
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < rows; start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, rows - start);
            const std::span<const std::size_t> batch(order.data() + start, count);
            double loss = 0.0;
            try {
                loss = grad_fn(std::as_const(params), batch, grad);
            } catch (const DivergenceError& e) {
                throw DivergenceError(e.what(), epoch + 1);
            }
            if (!std::isfinite(loss)) {
                throw DivergenceError("training loss became non-finite", epoch + 1);
            }
            loss_sum += loss * static_cast<double>(count);

            double norm2 = 0.0;
            for (auto g : grad.tensors()) {
                for (double v : g) {
                    norm2 += v * v;
                }
            }
            const double norm = std::sqrt(norm2);
            if (!std::isfinite(norm)) {
                throw DivergenceError("gradient became non-finite", epoch + 1);
            }
            const double scale = norm > config.clip_norm ? config.clip_norm / norm : 1.0;

            auto p = params.tensors();
            auto g = grad.tensors();
            auto v = velocity.tensors();
            for (std::size_t t = 0; t < p.size(); ++t) {
                for (std::size_t i = 0; i < p[t].size(); ++i) {
                    v[t][i] = config.momentum * v[t][i] - config.learning_rate * scale * g[t][i];
                    p[t][i] += v[t][i];
                }
            }
        }
        if (epoch_loss) {
            epoch_loss->push_back(loss_sum / static_cast<double>(rows));
        }
    }
}

} // namespace cbosel
