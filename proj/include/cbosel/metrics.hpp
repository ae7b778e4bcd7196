// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbosel {

/// K×K counts, rows = true class, columns = predicted class.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t classes) : k_(classes), counts_(classes * classes, 0) {}

    std::size_t classes() const { return k_; }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * k_ + predicted]; }
    std::uint64_t& at(std::size_t truth, std::size_t predicted) { return counts_[truth * k_ + predicted]; }
    std::uint64_t total() const;
    std::uint64_t trace() const;

private:
    std::size_t k_;
    std::vector<std::uint64_t> counts_;
};

struct BinaryCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

/// The ten reported measures, in report column order.
struct MetricValues {
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double precision = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    double npv = 0.0;
    double fdr = 0.0;
    double f1 = 0.0;
    double mcc = 0.0;

    std::array<double, 10> as_array() const;
};

/// Column headers matching MetricValues::as_array().
inline constexpr std::array<std::string_view, 10> kMetricColumns{
    "Accuracy", "Sensitivity", "Specificity", "Precision", "FPR", "FNR", "NPV", "FDR", "F1 score", "MCC"};

struct MetricReport {
    /// Summary row. For multiclass reports every column except Accuracy is the
    /// unweighted mean over one-vs-rest classes; Accuracy is trace / total.
    MetricValues summary;
    std::vector<MetricValues> per_class;
    /// Set when some ratio had a zero denominator and was reported as 0.
    bool zero_denominator = false;
};

/// Throws std::invalid_argument on length mismatch or labels >= classes.
ConfusionMatrix confusion_from_predictions(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                           std::size_t classes);

BinaryCounts one_vs_rest_counts(const ConfusionMatrix& matrix, std::size_t k);

/// Throws std::invalid_argument when the counts total zero. `zero_denominator`
/// (optional) is set when any ratio was defined as 0.
MetricValues compute_metrics(const BinaryCounts& counts, bool* zero_denominator = nullptr);

/// F1 from precision and sensitivity (harmonic mean); 0 when both are 0.
double f1_score(double precision, double sensitivity);

MetricReport macro_average(const ConfusionMatrix& matrix);

/// Six-decimal CSV fields for the ten metrics, comma-joined, no newline.
std::string format_metric_fields(const MetricValues& values);

} // namespace cbosel
