// SPDX-License-Identifier: Apache-2.0
#pragma once

// Comparison classifiers: Euclidean k-nearest-neighbours and a one-hidden-
// layer tanh network trained with the same SGD machinery as the GRU.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cbosel/dataset.hpp"
#include "cbosel/training.hpp"

namespace cbosel {

/// Majority label among the k nearest rows of `train` (k clamped to the row
/// count). Distance ties go to the lower row index, vote ties to the smaller
/// label.
std::size_t knn_classify(const LabeledDataset& train, std::span<const double> query, std::size_t k);

std::vector<std::size_t> knn_predict(const LabeledDataset& train, const LabeledDataset& queries, std::size_t k);

struct NnParameters {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t classes = 0;
    std::vector<double> w_hidden; ///< hidden × inputs
    std::vector<double> b_hidden; ///< hidden
    std::vector<double> w_out;    ///< classes × hidden
    std::vector<double> b_out;    ///< classes

    static NnParameters zeros(std::size_t inputs, std::size_t hidden, std::size_t classes);

    std::array<std::span<double>, 4> tensors();
    std::array<std::span<const double>, 4> tensors() const;
};

Prediction nn_forward(std::span<const double> sample, const NnParameters& params);

double nn_loss_and_gradients(const NnParameters& params, const LabeledDataset& data, std::span<const std::size_t> rows,
                             NnParameters& grad);

NnParameters init_nn(std::size_t inputs, std::size_t classes, const TrainConfig& config);

NnParameters train_nn(const LabeledDataset& train, const TrainConfig& config, std::vector<double>* epoch_loss = nullptr);

std::vector<Prediction> predict_nn(const NnParameters& params, const LabeledDataset& data);

} // namespace cbosel
