// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cbosel/dataset.hpp"
#include "cbosel/training.hpp"

namespace cbosel {

enum class ClassifierKind { gru, knn, nn };

std::string_view to_string(ClassifierKind kind);

/// Accepts "gru" (alias "rnn"), "knn", "nn". Throws ConfigError otherwise.
ClassifierKind parse_classifier(std::string_view name);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::gru;
    TrainConfig train;
    std::size_t knn_k = 5;
};

/// Trains the configured classifier on `train` and labels every row of
/// `test`. `seed` replaces train.seed so callers control reproducibility.
std::vector<std::size_t> fit_predict(const ClassifierConfig& config, const LabeledDataset& train,
                                     const LabeledDataset& test, std::uint64_t seed);

} // namespace cbosel
