// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "cbosel/training.hpp"

namespace cbosel {

void TrainConfig::validate() const {
    if (hidden_dim == 0) {
        throw ConfigError("hidden size must be positive");
    }
    if (batch_size == 0) {
        throw ConfigError("batch size must be positive");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ConfigError("momentum must be in [0, 1)");
    }
    if (!(clip_norm > 0.0)) {
        throw ConfigError("gradient clip norm must be positive");
    }
    if (chunk_size && *chunk_size == 0) {
        throw ConfigError("chunk size must be positive");
    }
}

void softmax(std::span<double> logits) {
    if (logits.empty()) {
        return;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - top);
        sum += v;
    }
    for (double& v : logits) {
        v /= sum;
    }
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

void init_uniform(std::span<double> values, std::size_t fan_in, Rng& rng) {
    const double limit = std::sqrt(1.0 / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
    for (double& v : values) {
        v = rng.uniform(-limit, limit);
    }
}

} // namespace cbosel
