// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "cbosel/metrics.hpp"
#include "cbosel/random.hpp"
#include "table2.hpp"

using namespace cbosel;

namespace {

ConfusionMatrix matrix_from(std::size_t k, std::initializer_list<std::uint64_t> counts) {
    ConfusionMatrix m(k);
    auto it = counts.begin();
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t p = 0; p < k; ++p) {
            m.at(t, p) = *it++;
        }
    }
    return m;
}

ConfusionMatrix random_matrix(std::size_t k, Rng& rng) {
    ConfusionMatrix m(k);
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t p = 0; p < k; ++p) {
            m.at(t, p) = rng.below(t == p ? 50 : 10) + 1;
        }
    }
    return m;
}

} // namespace

TEST(Confusion, AllCorrectIsDiagonal) {
    const std::vector<std::size_t> y{0, 1, 2, 2, 1};
    const auto m = confusion_from_predictions(y, y, 3);
    EXPECT_EQ(m.trace(), 5u);
    EXPECT_EQ(m.total(), 5u);
    EXPECT_EQ(m.at(2, 2), 2u);
}

TEST(Confusion, SwappedLabelsAreAntidiagonal) {
    const std::vector<std::size_t> t{0, 1}, p{1, 0};
    const auto m = confusion_from_predictions(t, p, 2);
    EXPECT_EQ(m.at(0, 1), 1u);
    EXPECT_EQ(m.at(1, 0), 1u);
    EXPECT_EQ(m.trace(), 0u);
}

TEST(Confusion, EmptyInputsGiveZeroMatrix) {
    const auto m = confusion_from_predictions({}, {}, 3);
    EXPECT_EQ(m.total(), 0u);
}

TEST(Confusion, RejectsBadInput) {
    const std::vector<std::size_t> a{0, 1}, b{0}, c{0, 3};
    EXPECT_THROW(confusion_from_predictions(a, b, 2), std::invalid_argument);
    EXPECT_THROW(confusion_from_predictions(a, c, 2), std::invalid_argument);
}

TEST(OneVsRest, PerfectDiagonal) {
    const auto m = matrix_from(3, {5, 0, 0, 0, 5, 0, 0, 0, 5});
    const auto c = one_vs_rest_counts(m, 0);
    EXPECT_EQ(c.tp, 5u);
    EXPECT_EQ(c.fp, 0u);
    EXPECT_EQ(c.fn, 0u);
    EXPECT_EQ(c.tn, 10u);
}

TEST(OneVsRest, TwoClassCounts) {
    const auto c = one_vs_rest_counts(matrix_from(2, {2, 1, 1, 6}), 0);
    EXPECT_EQ(c.tp, 2u);
    EXPECT_EQ(c.fp, 1u);
    EXPECT_EQ(c.fn, 1u);
    EXPECT_EQ(c.tn, 6u);
}

TEST(OneVsRest, PropertyCountsPartitionTotal) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_matrix(2 + rng.below(5), rng);
        for (std::size_t k = 0; k < m.classes(); ++k) {
            ASSERT_EQ(one_vs_rest_counts(m, k).total(), m.total());
        }
    }
}

TEST(Metrics, HandComputedBinaryCase) {
    const auto v = compute_metrics({2, 1, 6, 1});
    EXPECT_NEAR(v.accuracy, 0.8, 1e-15);
    EXPECT_NEAR(v.precision, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(v.sensitivity, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(v.specificity, 6.0 / 7.0, 1e-15);
    EXPECT_NEAR(v.f1, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(v.mcc, 11.0 / 21.0, 1e-15);
    EXPECT_NEAR(v.npv, 6.0 / 7.0, 1e-15);
    EXPECT_NEAR(v.fdr, 1.0 / 3.0, 1e-15);
}

TEST(Metrics, PerfectClassifier) {
    bool flagged = false;
    const auto v = compute_metrics({4, 0, 6, 0}, &flagged);
    EXPECT_FALSE(flagged);
    EXPECT_EQ(v.accuracy, 1.0);
    EXPECT_EQ(v.f1, 1.0);
    EXPECT_EQ(v.mcc, 1.0);
    EXPECT_EQ(v.fpr, 0.0);
    EXPECT_EQ(v.fnr, 0.0);
}

TEST(Metrics, PublishedF1FromPrecisionAndSensitivity) {
    EXPECT_NEAR(f1_score(0.646452, 0.909256), 0.755656, 5e-6);
    EXPECT_EQ(f1_score(0.0, 0.0), 0.0);
}

TEST(Metrics, PublishedRowsAreSelfConsistent) {
    for (const auto& row : test_support::kPublishedUciHarRows) {
        const auto& v = row.values;
        EXPECT_NEAR(v[1] + v[5], 1.0, 5e-6) << row.algorithm;
        EXPECT_NEAR(v[2] + v[4], 1.0, 5e-6) << row.algorithm;
        EXPECT_NEAR(f1_score(v[3], v[1]), v[8], 5e-6) << row.algorithm;
    }
}

TEST(Metrics, ZeroDenominatorReportsZeroAndFlags) {
    bool flagged = false;
    const auto v = compute_metrics({0, 0, 5, 3}, &flagged);
    EXPECT_TRUE(flagged);
    EXPECT_EQ(v.precision, 0.0);
    EXPECT_EQ(v.mcc, 0.0);
    EXPECT_EQ(v.sensitivity, 0.0);
    EXPECT_THROW(compute_metrics({0, 0, 0, 0}), std::invalid_argument);
}

TEST(Metrics, ConstantPredictorHasZeroMcc) {
    // Two classes, everything predicted as class 0.
    const auto report = macro_average(matrix_from(2, {7, 0, 3, 0}));
    EXPECT_EQ(report.summary.mcc, 0.0);
    EXPECT_TRUE(report.zero_denominator);
}

TEST(MacroAverage, PerfectClassifierScoresOne) {
    const auto r = macro_average(matrix_from(3, {4, 0, 0, 0, 6, 0, 0, 0, 2}));
    for (double v : {r.summary.accuracy, r.summary.sensitivity, r.summary.specificity, r.summary.precision,
                     r.summary.npv, r.summary.f1, r.summary.mcc}) {
        EXPECT_EQ(v, 1.0);
    }
    EXPECT_EQ(r.per_class.size(), 3u);
}

TEST(MacroAverage, SymmetricTwoClass) {
    const auto r = macro_average(matrix_from(2, {7, 3, 3, 7}));
    EXPECT_NEAR(r.summary.sensitivity, 0.7, 1e-15);
    EXPECT_NEAR(r.summary.specificity, 0.7, 1e-15);
}

TEST(MacroAverage, AccuracyIsTraceOverTotal) {
    const auto m = matrix_from(3, {5, 1, 0, 2, 8, 1, 0, 3, 4});
    EXPECT_NEAR(macro_average(m).summary.accuracy, 17.0 / 24.0, 1e-15);
}

TEST(MacroAverage, PropertyComplementsAndPermutation) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + rng.below(5);
        const auto m = random_matrix(k, rng);
        const auto r = macro_average(m);
        ASSERT_NEAR(r.summary.sensitivity + r.summary.fnr, 1.0, 1e-12);
        ASSERT_NEAR(r.summary.specificity + r.summary.fpr, 1.0, 1e-12);
        ASSERT_NEAR(r.summary.precision + r.summary.fdr, 1.0, 1e-12);
        for (const auto& c : r.per_class) {
            ASSERT_NEAR(c.sensitivity + c.fnr, 1.0, 1e-12);
            ASSERT_NEAR(c.specificity + c.fpr, 1.0, 1e-12);
        }

        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(std::span(perm));
        ConfusionMatrix permuted(k);
        for (std::size_t t = 0; t < k; ++t) {
            for (std::size_t p = 0; p < k; ++p) {
                permuted.at(perm[t], perm[p]) = m.at(t, p);
            }
        }
        const auto a = r.summary.as_array();
        const auto b = macro_average(permuted).summary.as_array();
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_NEAR(a[i], b[i], 1e-12);
        }
    }
}

TEST(MacroAverage, MccPositiveWhenBetterThanChance) {
    EXPECT_GT(macro_average(matrix_from(2, {8, 2, 3, 7})).summary.mcc, 0.0);
}

TEST(MacroAverage, RejectsSingleClass) {
    EXPECT_THROW(macro_average(ConfusionMatrix(1)), std::invalid_argument);
}

TEST(MetricFormat, SixDecimalsInColumnOrder) {
    const auto v = compute_metrics({2, 1, 6, 1});
    EXPECT_EQ(format_metric_fields(v),
              "0.800000,0.666667,0.857143,0.666667,0.142857,0.333333,0.857143,0.333333,0.666667,0.523810");
    EXPECT_EQ(kMetricColumns.front(), "Accuracy");
    EXPECT_EQ(kMetricColumns.back(), "MCC");
}
