// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment harness behind the command-line tool: configuration, data
// preparation, and the select / evaluate / compare / bench-opt / report
// commands. Commands write their result files and print a short summary to
// the given stream; failures are reported as exceptions (see errors.hpp).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbosel/classifier.hpp"
#include "cbosel/dataset.hpp"
#include "cbosel/feature_selection.hpp"
#include "cbosel/metrics.hpp"

namespace cbosel {

struct ExperimentConfig {
    DataSource dataset = DataSource::synthetic;
    std::filesystem::path data_dir;
    OptimizerKind optimizer = OptimizerKind::cbo;
    std::size_t population = 10;
    std::size_t iterations = 25;
    /// Unset: UCI-HAR keeps its published split, other sources use 70.
    std::optional<double> learning_percentage;
    ClassifierKind classifier = ClassifierKind::gru;
    /// Unset: 32 for the GRU, 64 for the NN baseline.
    std::optional<std::size_t> hidden_size;
    std::size_t epochs = 60;
    std::size_t selection_epochs = 15;
    std::size_t batch_size = 32;
    double learning_rate = 0.01;
    std::optional<std::size_t> chunk_size;
    std::size_t knn_k = 5;
    std::uint64_t seed = 1;
    std::size_t jobs = 0;
    std::filesystem::path output;
    std::optional<std::filesystem::path> mask_file;
    std::optional<std::string> label;
    /// 0 = no limit. Stratified subsampling after the split.
    std::size_t train_limit = 0;
    std::size_t test_limit = 0;
    std::size_t synthetic_samples = 400;
    std::size_t window_length = 200;
    double window_overlap = 0.5;
    // compare / bench-opt
    std::string axis = "features";
    std::string function = "sphere";
    std::size_t dim = 10;

    /// Applies one `key = value` setting; keys are the long flag names
    /// without dashes. Throws ConfigError on unknown keys or bad values.
    void set(std::string_view key, std::string_view value);

    /// Reads UTF-8 `key = value` lines; '#' starts a comment.
    void load_file(const std::filesystem::path& path);

    ClassifierConfig classifier_config(ClassifierKind kind, std::size_t epochs) const;
    SelectionConfig selection_config(OptimizerKind kind) const;
};

/// Every key accepted by ExperimentConfig::set.
const std::vector<std::string>& config_keys();

struct PreparedData {
    LabeledDataset train;
    LabeledDataset test;
};

/// Loads the configured dataset, splits, subsamples and normalizes it with
/// parameters fit on the training portion only.
PreparedData prepare_data(const ExperimentConfig& config);

struct ReportRow {
    std::string algorithm;
    MetricReport metrics;
    std::uint64_t seed = 0;
    std::size_t features = 0;
    double learning_percentage = 0.0;
    double wall_seconds = 0.0; ///< printed in summaries, never written to files
};

/// Header line of the report CSV (no newline).
std::string report_csv_header();
std::string report_csv_row(const ReportRow& row);

/// Trains `kind` on the masked training portion and scores the test portion.
ReportRow evaluate_mask(const ExperimentConfig& config, const PreparedData& data, const FeatureMask& mask,
                        ClassifierKind kind, std::string algorithm);

/// Relative improvement (a − b)/b formatted as a signed percentage, e.g. "+2.27%".
std::string percent_delta(double a, double b);

void cmd_select(const ExperimentConfig& config, std::ostream& log);
void cmd_evaluate(const ExperimentConfig& config, std::ostream& log);
void cmd_compare(const ExperimentConfig& config, std::ostream& log);
void cmd_bench_opt(const ExperimentConfig& config, std::ostream& log);

/// Merges report CSVs into a markdown table written to `out`.
void cmd_report(const std::vector<std::filesystem::path>& csv_paths, std::ostream& out);

} // namespace cbosel
