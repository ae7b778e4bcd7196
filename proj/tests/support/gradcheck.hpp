// SPDX-License-Identifier: Apache-2.0
#pragma once

// Central finite-difference checks for the trainable classifiers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "cbosel/baselines.hpp"
#include "cbosel/dataset.hpp"
#include "cbosel/gru.hpp"
#include "cbosel/random.hpp"

namespace cbosel::test_support {

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
};

/// |a − n| / max(|a|, |n|, floor): relative where the gradient is
/// meaningful, absolute near zero.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

inline LabeledDataset random_dataset(std::size_t rows, std::size_t cols, std::size_t classes, Rng& rng) {
    LabeledDataset d;
    d.rows = rows;
    d.cols = cols;
    d.features.resize(rows * cols);
    for (auto& v : d.features) {
        v = rng.uniform(-1.0, 1.0);
    }
    for (std::size_t i = 0; i < rows; ++i) {
        d.labels.push_back(static_cast<std::size_t>(rng.below(classes)));
    }
    for (std::size_t k = 0; k < classes; ++k) {
        d.class_names.push_back("c" + std::to_string(k));
    }
    return d;
}

template <typename Params, typename LossFn>
GradCheckResult check_gradients(Params params, const LabeledDataset& data, LossFn&& loss_fn, double step = 1e-5) {
    std::vector<std::size_t> rows(data.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Params grad = params;
    loss_fn(params, data, std::span<const std::size_t>(rows), grad);
    Params scratch = params;

    GradCheckResult result;
    auto p = params.tensors();
    auto g = grad.tensors();
    for (std::size_t t = 0; t < p.size(); ++t) {
        for (std::size_t i = 0; i < p[t].size(); ++i) {
            const double saved = p[t][i];
            p[t][i] = saved + step;
            const double plus = loss_fn(params, data, std::span<const std::size_t>(rows), scratch);
            p[t][i] = saved - step;
            const double minus = loss_fn(params, data, std::span<const std::size_t>(rows), scratch);
            p[t][i] = saved;
            const double numeric = (plus - minus) / (2.0 * step);
            result.max_relative_error = std::max(result.max_relative_error, relative_error(g[t][i], numeric));
            ++result.checked;
        }
    }
    return result;
}

/// Random GRU instance: input ≤ 5 per step, hidden ≤ 6, steps ≤ 4. Biases are
/// randomized too so every gradient entry is exercised.
inline GradCheckResult gru_gradient_trial(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t step_dim = 1 + rng.below(5);
    const std::size_t steps = 1 + rng.below(4);
    const std::size_t hidden = 1 + rng.below(6);
    const std::size_t classes = 2 + rng.below(3);
    const std::size_t features = step_dim * (steps - 1) + 1 + rng.below(step_dim);
    auto data = random_dataset(3, features, classes, rng);
    auto params = GruParameters::zeros(features, step_dim, hidden, classes);
    for (auto t : params.tensors()) {
        for (auto& v : t) {
            v = rng.uniform(-0.8, 0.8);
        }
    }
    return check_gradients(params, data, [](const GruParameters& p, const LabeledDataset& d,
                                            std::span<const std::size_t> r, GruParameters& g) {
        return gru_loss_and_gradients(p, d, r, g);
    });
}

inline GradCheckResult nn_gradient_trial(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t inputs = 1 + rng.below(5);
    const std::size_t hidden = 1 + rng.below(6);
    const std::size_t classes = 2 + rng.below(3);
    auto data = random_dataset(3, inputs, classes, rng);
    auto params = NnParameters::zeros(inputs, hidden, classes);
    for (auto t : params.tensors()) {
        for (auto& v : t) {
            v = rng.uniform(-0.8, 0.8);
        }
    }
    return check_gradients(params, data, [](const NnParameters& p, const LabeledDataset& d,
                                            std::span<const std::size_t> r, NnParameters& g) {
        return nn_loss_and_gradients(p, d, r, g);
    });
}

} // namespace cbosel::test_support
