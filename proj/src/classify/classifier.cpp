// SPDX-License-Identifier: Apache-2.0
#include "cbosel/classifier.hpp"

#include <string>

#include "cbosel/baselines.hpp"
#include "cbosel/gru.hpp"

namespace cbosel {

std::string_view to_string(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::knn:
        return "knn";
    case ClassifierKind::nn:
        return "nn";
    case ClassifierKind::gru:
        break;
    }
    return "gru";
}

ClassifierKind parse_classifier(std::string_view name) {
    if (name == "gru" || name == "rnn") {
        return ClassifierKind::gru;
    }
    if (name == "knn") {
        return ClassifierKind::knn;
    }
    if (name == "nn") {
        return ClassifierKind::nn;
    }
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected gru, knn or nn)");
}

std::vector<std::size_t> fit_predict(const ClassifierConfig& config, const LabeledDataset& train,
                                     const LabeledDataset& test, std::uint64_t seed) {
    std::vector<std::size_t> labels;
    labels.reserve(test.rows);
    switch (config.kind) {
    case ClassifierKind::knn:
        return knn_predict(train, test, config.knn_k);
    case ClassifierKind::nn: {
        auto cfg = config.train;
        cfg.seed = seed;
        const auto params = train_nn(train, cfg);
        for (const auto& p : predict_nn(params, test)) {
            labels.push_back(p.label);
        }
        return labels;
    }
    case ClassifierKind::gru:
        break;
    }
    auto cfg = config.train;
    cfg.seed = seed;
    const auto params = train_gru(train, cfg);
    for (const auto& p : predict_gru(params, test)) {
        labels.push_back(p.label);
    }
    return labels;
}

} // namespace cbosel
