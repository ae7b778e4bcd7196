// SPDX-License-Identifier: Apache-2.0
#pragma once

// Wrapper feature selection: optimizer positions in [0,1]^NF decode to
// feature masks, and a mask is scored by training a classifier on the
// selected columns and measuring validation accuracy.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbosel/classifier.hpp"
#include "cbosel/dataset.hpp"
#include "cbosel/optimizer.hpp"

namespace cbosel {

struct FeatureMask {
    std::vector<bool> included;
    std::size_t count = 0;

    static FeatureMask all(std::size_t features);
    /// Throws std::invalid_argument when the mask selects nothing.
    static FeatureMask from_bits(std::vector<bool> bits);

    std::size_t size() const { return included.size(); }
    /// Included column indices, ascending.
    std::vector<std::size_t> columns() const;
    std::string to_string() const; ///< e.g. "0110"
};

/// Feature d is included iff position[d] ≥ threshold; when nothing reaches
/// the threshold, the largest component (lowest index on ties) is included.
FeatureMask decode_mask(std::span<const double> position, double threshold = 0.5);

struct WrapperFitnessSpec {
    const LabeledDataset* train = nullptr;
    const LabeledDataset* validation = nullptr;
    ClassifierConfig classifier;
    double threshold = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Classifier seed for a candidate: a function of the master seed and the
/// mask only, so equal masks always score identically.
std::uint64_t mask_seed(std::uint64_t master, const FeatureMask& mask);

/// Validation accuracy of the classifier trained on the masked columns.
/// A diverging classifier scores 0 (with a warning on stderr).
double mask_fitness(const FeatureMask& mask, const WrapperFitnessSpec& spec);

double wrapper_fitness(std::span<const double> position, const WrapperFitnessSpec& spec);

enum class OptimizerKind { cbo, pso, ff, none };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct SelectionConfig {
    OptimizerKind optimizer = OptimizerKind::cbo;
    std::size_t population = 10;
    std::size_t iterations = 25;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    ClassifierConfig classifier = [] {
        ClassifierConfig c;
        c.train.epochs = 15;
        return c;
    }();
    double threshold = 0.5;
    /// Share of the training portion used to fit candidates; the rest validates.
    double holdout_learning_percentage = 80.0;
};

struct SelectionResult {
    FeatureMask mask;
    double accuracy = 0.0;
    std::vector<double> position; ///< optimizer position that produced `mask`
    OptimizationTrace trace;
    std::uint64_t seed = 0;
    std::string optimizer;
};

struct Holdout {
    LabeledDataset fit;
    LabeledDataset validation;
};

/// The stratified train/validation carve-out select_features scores against.
Holdout selection_holdout(const LabeledDataset& train_portion, const SelectionConfig& config);

/// The wrapper spec select_features uses over `holdout`.
WrapperFitnessSpec selection_spec(const Holdout& holdout, const SelectionConfig& config);

/// Maximizes validation accuracy over [0,1]^NF with the chosen optimizer.
/// OptimizerKind::none returns the all-features mask.
SelectionResult select_features(const LabeledDataset& train_portion, const SelectionConfig& config);

/// {"optimizer", "seed", "accuracy", "selected_count", "feature_count",
///  "mask": [0/1...], "position": [...], "trace": {"best_fitness": [...],
///  "evaluations"}}, pretty-printed, trailing newline.
std::string selection_to_json(const SelectionResult& result);

/// Reads a document written by selection_to_json.
SelectionResult selection_from_json(std::string_view json);

} // namespace cbosel
