// SPDX-License-Identifier: Apache-2.0
#include "cbosel/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "cbosel/errors.hpp"
#include "cbosel/random.hpp"

namespace cbosel {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty()) {
        throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            throw ConfigError("non-finite value for " + std::string(key));
        }
    }
    return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
    return parse_number<std::size_t>(key, value);
}

std::size_t parse_positive(std::string_view key, std::string_view value) {
    const auto n = parse_count(key, value);
    if (n == 0) {
        throw ConfigError(std::string(key) + " must be positive");
    }
    return n;
}

DataSource parse_dataset(std::string_view name) {
    if (name == "ucihar" || name == "uci-har") {
        return DataSource::ucihar;
    }
    if (name == "wisdm") {
        return DataSource::wisdm;
    }
    if (name == "synthetic") {
        return DataSource::synthetic;
    }
    throw ConfigError("unknown dataset '" + std::string(name) + "' (expected ucihar, wisdm or synthetic)");
}

std::filesystem::path wisdm_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw MissingInputError("WISDM input not found: " + path.string());
    }
    if (!std::filesystem::is_directory(path)) {
        return path;
    }
    const auto named = path / "WISDM_ar_v1.1_raw.txt";
    if (std::filesystem::exists(named)) {
        return named;
    }
    std::vector<std::filesystem::path> candidates;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.find("raw") != std::string::npos && entry.path().extension() == ".txt") {
            candidates.push_back(entry.path());
        }
    }
    if (candidates.empty()) {
        throw MissingInputError("no WISDM raw file in " + path.string());
    }
    std::sort(candidates.begin(), candidates.end());
    return candidates.front();
}

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "dataset",       "data-dir",          "optimizer",     "population",     "iterations",
        "learning-percentage", "classifier",  "hidden-size",   "epochs",         "selection-epochs",
        "batch-size",    "learning-rate",     "chunk-size",    "knn-k",          "seed",
        "jobs",          "output",            "mask",          "label",          "train-limit",
        "test-limit",    "synthetic-samples", "window-length", "window-overlap", "axis",
        "function",      "dim"};
    return keys;
}

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
    std::string key(raw_key);
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(raw_value);

    if (key == "dataset") {
        dataset = parse_dataset(value);
    } else if (key == "data-dir") {
        data_dir = value;
    } else if (key == "optimizer") {
        optimizer = parse_optimizer(value);
    } else if (key == "population") {
        population = parse_positive(key, value);
    } else if (key == "iterations") {
        iterations = parse_positive(key, value);
    } else if (key == "learning-percentage") {
        const double p = parse_number<double>(key, value);
        if (!(p > 0.0 && p < 100.0)) {
            throw ConfigError("learning-percentage must be in (0, 100)");
        }
        learning_percentage = p;
    } else if (key == "classifier") {
        classifier = parse_classifier(value);
    } else if (key == "hidden-size") {
        hidden_size = parse_positive(key, value);
    } else if (key == "epochs") {
        epochs = parse_positive(key, value);
    } else if (key == "selection-epochs") {
        selection_epochs = parse_positive(key, value);
    } else if (key == "batch-size") {
        batch_size = parse_positive(key, value);
    } else if (key == "learning-rate") {
        learning_rate = parse_number<double>(key, value);
        if (learning_rate <= 0.0) {
            throw ConfigError("learning-rate must be positive");
        }
    } else if (key == "chunk-size") {
        const auto n = parse_count(key, value);
        chunk_size = n == 0 ? std::nullopt : std::optional<std::size_t>(n);
    } else if (key == "knn-k") {
        knn_k = parse_positive(key, value);
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "jobs") {
        jobs = parse_count(key, value);
    } else if (key == "output") {
        output = value;
    } else if (key == "mask") {
        mask_file = std::filesystem::path(value);
    } else if (key == "label") {
        label = value;
    } else if (key == "train-limit") {
        train_limit = parse_count(key, value);
    } else if (key == "test-limit") {
        test_limit = parse_count(key, value);
    } else if (key == "synthetic-samples") {
        synthetic_samples = parse_positive(key, value);
    } else if (key == "window-length") {
        window_length = parse_positive(key, value);
    } else if (key == "window-overlap") {
        window_overlap = parse_number<double>(key, value);
    } else if (key == "axis") {
        if (value != "optimizers" && value != "classifiers" && value != "features") {
            throw ConfigError("unknown axis '" + value + "' (expected optimizers, classifiers or features)");
        }
        axis = value;
    } else if (key == "function") {
        function = value;
    } else if (key == "dim") {
        dim = parse_positive(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + std::string(raw_key) + "'");
    }
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingInputError("cannot open config file " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto text = trim(line);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(std::string_view(text).substr(0, eq));
        try {
            set(key, std::string_view(text).substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

ClassifierConfig ExperimentConfig::classifier_config(ClassifierKind kind, std::size_t train_epochs) const {
    ClassifierConfig c;
    c.kind = kind;
    c.train.hidden_dim = hidden_size.value_or(kind == ClassifierKind::nn ? 64 : 32);
    c.train.epochs = train_epochs;
    c.train.batch_size = batch_size;
    c.train.learning_rate = learning_rate;
    c.train.chunk_size = chunk_size;
    c.knn_k = knn_k;
    return c;
}

SelectionConfig ExperimentConfig::selection_config(OptimizerKind kind) const {
    SelectionConfig s;
    s.optimizer = kind;
    s.population = population;
    s.iterations = iterations;
    s.seed = seed;
    s.jobs = jobs;
    s.classifier = classifier_config(classifier, selection_epochs);
    return s;
}

PreparedData prepare_data(const ExperimentConfig& config) {
    SplitSpec split;
    split.learning_percentage = config.learning_percentage.value_or(70.0);
    split.seed = combine_seeds(config.seed, 21);

    PreparedData data;
    switch (config.dataset) {
    case DataSource::synthetic: {
        SyntheticSpec spec;
        spec.samples = config.synthetic_samples;
        std::tie(data.train, data.test) = split_train_test(make_synthetic(spec), split);
        break;
    }
    case DataSource::ucihar: {
        if (config.data_dir.empty()) {
            throw MissingInputError("the ucihar dataset needs --data-dir");
        }
        auto loaded = load_ucihar(config.data_dir);
        if (config.learning_percentage) {
            std::tie(data.train, data.test) = split_train_test(concat_rows(loaded.train, loaded.test), split);
        } else {
            data.train = std::move(loaded.train);
            data.test = std::move(loaded.test);
        }
        break;
    }
    case DataSource::wisdm: {
        if (config.data_dir.empty()) {
            throw MissingInputError("the wisdm dataset needs --data-dir");
        }
        const auto load = load_wisdm_raw(wisdm_file(config.data_dir));
        WindowSpec window;
        window.length = config.window_length;
        window.overlap = config.window_overlap;
        std::tie(data.train, data.test) = split_train_test(build_wisdm_dataset(load.records, window), split);
        break;
    }
    }

    if (config.train_limit > 0) {
        data.train = stratified_subsample(data.train, config.train_limit, combine_seeds(config.seed, 22));
    }
    if (config.test_limit > 0) {
        data.test = stratified_subsample(data.test, config.test_limit, combine_seeds(config.seed, 23));
    }
    const auto params = fit_normalization(data.train);
    apply_normalization(data.train, params);
    apply_normalization(data.test, params);
    return data;
}

std::string report_csv_header() {
    std::string out = "Algorithm";
    for (auto column : kMetricColumns) {
        out += ',';
        out += column;
    }
    out += ",Seed,Features,LearningPercentage";
    return out;
}

std::string report_csv_row(const ReportRow& row) {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%g", row.learning_percentage);
    return row.algorithm + ',' + format_metric_fields(row.metrics.summary) + ',' + std::to_string(row.seed) + ',' +
           std::to_string(row.features) + ',' + pct;
}

ReportRow evaluate_mask(const ExperimentConfig& config, const PreparedData& data, const FeatureMask& mask,
                        ClassifierKind kind, std::string algorithm) {
    if (mask.size() != data.train.cols) {
        throw ConfigError("mask has " + std::to_string(mask.size()) + " entries but the dataset has " +
                          std::to_string(data.train.cols) + " features");
    }
    const auto start = std::chrono::steady_clock::now();
    const auto columns = mask.columns();
    const auto train = project_columns(data.train, columns);
    const auto test = project_columns(data.test, columns);
    const auto predicted = fit_predict(config.classifier_config(kind, config.epochs), train, test,
                                       combine_seeds(config.seed, 31));
    const auto matrix = confusion_from_predictions(test.labels, predicted, test.class_count());

    ReportRow row;
    row.algorithm = std::move(algorithm);
    row.metrics = macro_average(matrix);
    row.seed = config.seed;
    row.features = mask.count;
    row.learning_percentage = config.learning_percentage.value_or(70.0);
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::string percent_delta(double a, double b) {
    if (b == 0.0) {
        return "n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.2f%%", 100.0 * (a - b) / b);
    return buf;
}

} // namespace cbosel
