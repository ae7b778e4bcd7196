// SPDX-License-Identifier: Apache-2.0
#pragma once

// Labeled feature matrices and the loaders, featurizers, normalization and
// splitting that produce them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbosel {

enum class DataSource { ucihar, wisdm, synthetic };

std::string_view to_string(DataSource source);

struct LabeledDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Row-major rows × cols.
    std::vector<double> features;
    /// 0-based class ids.
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    DataSource source = DataSource::synthetic;

    std::span<const double> row(std::size_t i) const { return {features.data() + i * cols, cols}; }
    std::size_t class_count() const { return class_names.size(); }

    /// Throws std::invalid_argument when shapes disagree, a label is out of
    /// range, or a feature is non-finite.
    void validate() const;
};

/// Rows in the given order.
LabeledDataset select_rows(const LabeledDataset& data, std::span<const std::size_t> indices);

/// Keeps `columns` (ascending, unique) in their original order.
LabeledDataset project_columns(const LabeledDataset& data, std::span<const std::size_t> columns);

/// Stacks `b` under `a`. Column counts and class lists must agree.
LabeledDataset concat_rows(const LabeledDataset& a, const LabeledDataset& b);

// --- Normalization -----------------------------------------------------------

struct NormalizationParams {
    double am = 1.0; ///< target maximum
    double bm = 0.0; ///< target minimum
    std::vector<double> column_min;
    std::vector<double> column_max;
};

/// (am − bm)·(value − min)/(max − min) + bm; constant columns map to bm.
/// Values outside [min, max] extrapolate linearly.
double normalize(double value, double min, double max, double am, double bm);

/// Per-column min/max of `train`. Throws std::invalid_argument unless am > bm.
NormalizationParams fit_normalization(const LabeledDataset& train, double am = 1.0, double bm = 0.0);

void apply_normalization(LabeledDataset& data, const NormalizationParams& params);

// --- UCI-HAR ------------------------------------------------------------------

inline constexpr std::size_t kUciHarFeatureCount = 561;

struct UciHarData {
    LabeledDataset train;
    LabeledDataset test;
};

/// Reads X_train.txt, y_train.txt, X_test.txt, y_test.txt from `dir`, or from
/// its train/ and test/ subdirectories as in the published archive. Uses
/// features.txt for column names when present.
UciHarData load_ucihar(const std::filesystem::path& dir);

/// One split from already-open streams. `what` prefixes error messages.
LabeledDataset parse_ucihar(std::istream& features, std::istream& labels, const std::string& what = "ucihar");

// --- WISDM --------------------------------------------------------------------

inline constexpr std::array<std::string_view, 6> kWisdmActivities{"Walking",    "Jogging", "Upstairs",
                                                                   "Downstairs", "Sitting", "Standing"};

struct WisdmRecord {
    int user = 0;
    std::string activity;
    std::int64_t timestamp = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct WisdmLoad {
    std::vector<WisdmRecord> records;
    std::size_t malformed = 0;       ///< unparseable entries (counted toward the 10% limit)
    std::size_t other_activity = 0;  ///< well-formed entries outside the six classes
};

/// Parses "user,activity,timestamp,x,y,z;" entries. Several entries may share
/// a line. Throws ParseError when more than 10% of entries are malformed.
WisdmLoad parse_wisdm_raw(std::istream& in);
WisdmLoad load_wisdm_raw(const std::filesystem::path& file);

struct WindowSpec {
    std::size_t length = 200;
    double overlap = 0.5;

    void validate() const;
    /// length·(1 − overlap) rounded down, at least 1.
    std::size_t stride() const;
};

struct SensorWindow {
    int user = 0;
    std::string activity;
    std::vector<std::array<double, 3>> samples;
};

/// Sliding windows over maximal runs of consecutive records with the same
/// (user, activity). Records must already be ordered by (user, timestamp).
std::vector<SensorWindow> window_wisdm(std::span<const WisdmRecord> records, const WindowSpec& spec);

inline constexpr std::size_t kWindowFeatureCount = 23;

/// Per axis x, y, z: mean, std, mean absolute deviation, min, max, RMS; then
/// corr(x,y), corr(x,z), corr(y,z); then mean and std of the magnitude.
/// Standard deviations use the population convention; a zero-variance axis
/// has correlation 0.
std::array<double, kWindowFeatureCount> extract_window_features(std::span<const std::array<double, 3>> window);

std::vector<std::string> window_feature_names();

/// Windows and featurizes records into a six-class dataset.
LabeledDataset build_wisdm_dataset(std::span<const WisdmRecord> records, const WindowSpec& spec);

// --- Splits -------------------------------------------------------------------

struct SplitSpec {
    double learning_percentage = 70.0;
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded shuffle split with round(N·p/100) training rows. The stratified
/// version allocates per-class counts by largest remainder so the global
/// total is exact, keeping at least one row of each class on both sides.
/// Index lists are returned in ascending order.
SplitIndices split_indices(const LabeledDataset& data, const SplitSpec& spec);

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data, const SplitSpec& spec);

/// Stratified random subset of `count` rows (all rows if count >= rows).
LabeledDataset stratified_subsample(const LabeledDataset& data, std::size_t count, std::uint64_t seed);

// --- Native cache format --------------------------------------------------------

/// "cbosel-matrix v1 <rows> <cols>", tab-separated rows of shortest
/// round-trip decimals, then "labels:" followed by space-separated ids.
void write_native(std::ostream& out, const LabeledDataset& data);
LabeledDataset read_native(std::istream& in);

// --- Synthetic fixture ----------------------------------------------------------

struct SyntheticSpec {
    std::size_t samples = 400;
    std::size_t features = 10;
    std::array<std::size_t, 2> informative{2, 7};
    /// Informative values avoid (0.5 − margin, 0.5 + margin).
    double margin = 0.1;
    std::uint64_t seed = 0;
};

/// Four balanced classes given by the quadrant of the two informative columns
/// (class = 2·[x_a ≥ 0.5] + [x_b ≥ 0.5]); every other column is uniform noise.
LabeledDataset make_synthetic(const SyntheticSpec& spec);

} // namespace cbosel
