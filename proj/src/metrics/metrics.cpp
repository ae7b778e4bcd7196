// SPDX-License-Identifier: Apache-2.0
#include "cbosel/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cbosel {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (auto c : counts_) {
        sum += c;
    }
    return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < k_; ++k) {
        sum += at(k, k);
    }
    return sum;
}

std::array<double, 10> MetricValues::as_array() const {
    return {accuracy, sensitivity, specificity, precision, fpr, fnr, npv, fdr, f1, mcc};
}

ConfusionMatrix confusion_from_predictions(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                           std::size_t classes) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("label vectors differ in length");
    }
    ConfusionMatrix matrix(classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= classes || predicted[i] >= classes) {
            throw std::invalid_argument("label out of range at index " + std::to_string(i));
        }
        ++matrix.at(truth[i], predicted[i]);
    }
    return matrix;
}

BinaryCounts one_vs_rest_counts(const ConfusionMatrix& matrix, std::size_t k) {
    if (k >= matrix.classes()) {
        throw std::invalid_argument("class index out of range");
    }
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (std::size_t j = 0; j < matrix.classes(); ++j) {
        row += matrix.at(k, j);
        col += matrix.at(j, k);
    }
    BinaryCounts c;
    c.tp = matrix.at(k, k);
    c.fn = row - c.tp;
    c.fp = col - c.tp;
    c.tn = matrix.total() - c.tp - c.fp - c.fn;
    return c;
}

namespace {

double ratio(double num, double den, bool& flagged) {
    if (den == 0.0) {
        flagged = true;
        return 0.0;
    }
    return num / den;
}

} // namespace

double f1_score(double precision, double sensitivity) {
    const double den = precision + sensitivity;
    return den == 0.0 ? 0.0 : 2.0 * precision * sensitivity / den;
}

MetricValues compute_metrics(const BinaryCounts& counts, bool* zero_denominator) {
    if (counts.total() == 0) {
        throw std::invalid_argument("cannot compute metrics over zero samples");
    }
    const double tp = static_cast<double>(counts.tp);
    const double fp = static_cast<double>(counts.fp);
    const double tn = static_cast<double>(counts.tn);
    const double fn = static_cast<double>(counts.fn);
    bool flagged = false;

    MetricValues m;
    m.accuracy = (tp + tn) / (tp + fp + tn + fn);
    m.sensitivity = ratio(tp, tp + fn, flagged);
    m.specificity = ratio(tn, tn + fp, flagged);
    m.precision = ratio(tp, tp + fp, flagged);
    m.fpr = ratio(fp, fp + tn, flagged);
    m.fnr = ratio(fn, fn + tp, flagged);
    m.npv = ratio(tn, tn + fn, flagged);
    m.fdr = ratio(fp, fp + tp, flagged);
    if (m.precision + m.sensitivity == 0.0) {
        flagged = true;
    }
    m.f1 = f1_score(m.precision, m.sensitivity);
    const double mcc_den = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
    m.mcc = ratio(tp * tn - fp * fn, mcc_den, flagged);

    if (zero_denominator) {
        *zero_denominator = *zero_denominator || flagged;
    }
    return m;
}

MetricReport macro_average(const ConfusionMatrix& matrix) {
    const std::size_t k = matrix.classes();
    if (k < 2) {
        throw std::invalid_argument("macro averaging needs at least two classes");
    }
    MetricReport report;
    report.per_class.reserve(k);
    MetricValues& s = report.summary;
    for (std::size_t c = 0; c < k; ++c) {
        const auto m = compute_metrics(one_vs_rest_counts(matrix, c), &report.zero_denominator);
        report.per_class.push_back(m);
        s.sensitivity += m.sensitivity;
        s.specificity += m.specificity;
        s.precision += m.precision;
        s.fpr += m.fpr;
        s.fnr += m.fnr;
        s.npv += m.npv;
        s.fdr += m.fdr;
        s.f1 += m.f1;
        s.mcc += m.mcc;
    }
    const double n = static_cast<double>(k);
    s.sensitivity /= n;
    s.specificity /= n;
    s.precision /= n;
    s.fpr /= n;
    s.fnr /= n;
    s.npv /= n;
    s.fdr /= n;
    s.f1 /= n;
    s.mcc /= n;
    s.accuracy = static_cast<double>(matrix.trace()) / static_cast<double>(matrix.total());
    return report;
}

std::string format_metric_fields(const MetricValues& values) {
    std::string out;
    char buf[32];
    bool first = true;
    for (double v : values.as_array()) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        if (!first) {
            out += ',';
        }
        out += buf;
        first = false;
    }
    return out;
}

} // namespace cbosel
