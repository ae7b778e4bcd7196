// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "cbosel/errors.hpp"
#include "cbosel/feature_selection.hpp"
#include "cbosel/random.hpp"

using namespace cbosel;

namespace {

SelectionConfig knn_selection(OptimizerKind kind, std::uint64_t seed) {
    SelectionConfig c;
    c.optimizer = kind;
    c.population = 6;
    c.iterations = 6;
    c.seed = seed;
    c.classifier.kind = ClassifierKind::knn;
    return c;
}

} // namespace

TEST(DecodeMask, ThresholdRule) {
    EXPECT_EQ(decode_mask(std::vector<double>{0.7, 0.2, 0.5}).to_string(), "101");
}

TEST(DecodeMask, ArgmaxFallback) {
    const auto m = decode_mask(std::vector<double>{0.1, 0.2});
    EXPECT_EQ(m.to_string(), "01");
    EXPECT_EQ(m.count, 1u);
}

TEST(DecodeMask, SaturatedPositionKeepsEverything) {
    EXPECT_EQ(decode_mask(std::vector<double>{0.5, 0.9, 1.0}).count, 3u);
}

TEST(DecodeMask, PropertyNeverEmpty) {
    Rng rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(1 + rng.below(20));
        for (auto& v : x) v = rng.uniform01() * 0.6;
        const auto m = decode_mask(x);
        ASSERT_GE(m.count, 1u);
        ASSERT_EQ(m.columns().size(), m.count);
    }
}

TEST(FeatureMask, FromBitsRejectsEmpty) {
    EXPECT_THROW(FeatureMask::from_bits({false, false}), std::invalid_argument);
    EXPECT_EQ(FeatureMask::from_bits({false, true, true}).columns(), (std::vector<std::size_t>{1, 2}));
}

TEST(Projection, PropertyMaskedColumnsInOrder) {
    const auto d = make_synthetic({});
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(d.cols);
        for (auto& v : x) v = rng.uniform01();
        const auto m = decode_mask(x);
        const auto p = project_columns(d, m.columns());
        ASSERT_EQ(p.cols, m.count);
        const auto cols = m.columns();
        for (std::size_t j = 0; j < cols.size(); ++j) {
            ASSERT_EQ(p.row(7)[j], d.row(7)[cols[j]]);
        }
    }
}

TEST(WrapperFitness, ConstantClassValidationScoresOne) {
    auto d = make_synthetic({});
    std::fill(d.labels.begin(), d.labels.end(), 2u);
    WrapperFitnessSpec spec;
    spec.train = &d;
    spec.validation = &d;
    spec.classifier.kind = ClassifierKind::knn;
    EXPECT_EQ(wrapper_fitness(std::vector<double>(d.cols, 0.8), spec), 1.0);
}

TEST(WrapperFitness, RandomLabelsScoreNearChance) {
    Rng rng(13);
    LabeledDataset train, validation;
    for (auto* d : {&train, &validation}) {
        d->rows = 3000;
        d->cols = 3;
        for (std::size_t i = 0; i < d->rows * d->cols; ++i) d->features.push_back(rng.uniform01());
        for (std::size_t i = 0; i < d->rows; ++i) d->labels.push_back(rng.below(6));
        d->class_names = {"a", "b", "c", "d", "e", "f"};
    }
    WrapperFitnessSpec spec;
    spec.train = &train;
    spec.validation = &validation;
    spec.classifier.kind = ClassifierKind::knn;
    spec.classifier.knn_k = 1;
    EXPECT_NEAR(wrapper_fitness(std::vector<double>{0.9, 0.9, 0.9}, spec), 1.0 / 6.0, 0.03);
}

TEST(WrapperFitness, DeterministicAndMaskKeyed) {
    const auto d = make_synthetic({});
    const auto holdout = selection_holdout(d, knn_selection(OptimizerKind::cbo, 1));
    auto spec = selection_spec(holdout, knn_selection(OptimizerKind::cbo, 1));
    spec.classifier.kind = ClassifierKind::gru;
    spec.classifier.train.epochs = 3;
    const std::vector<double> a{0.9, 0.1, 0.6, 0.2, 0.3, 0.0, 0.1, 0.7, 0.2, 0.3};
    auto b = a;
    b[0] = 0.55; // same mask, different position
    EXPECT_EQ(wrapper_fitness(a, spec), wrapper_fitness(a, spec));
    EXPECT_EQ(wrapper_fitness(a, spec), wrapper_fitness(b, spec));
    EXPECT_EQ(mask_seed(4, decode_mask(a)), mask_seed(4, decode_mask(b)));
    EXPECT_NE(mask_seed(4, decode_mask(a)), mask_seed(5, decode_mask(a)));
}

TEST(WrapperFitness, AllOnesMaskEqualsAllFeaturesBaseline) {
    const auto d = make_synthetic({});
    const auto config = knn_selection(OptimizerKind::cbo, 3);
    const auto holdout = selection_holdout(d, config);
    auto spec = selection_spec(holdout, config);
    spec.classifier.kind = ClassifierKind::nn;
    spec.classifier.train.epochs = 4;
    const auto all = FeatureMask::all(d.cols);
    const auto predicted = fit_predict(spec.classifier, holdout.fit, holdout.validation, mask_seed(spec.seed, all));
    std::size_t hit = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        hit += predicted[i] == holdout.validation.labels[i];
    }
    EXPECT_EQ(mask_fitness(all, spec), static_cast<double>(hit) / static_cast<double>(predicted.size()));
}

TEST(SelectFeatures, ResultAgreesWithReevaluation) {
    const auto d = make_synthetic({});
    for (auto kind : {OptimizerKind::cbo, OptimizerKind::pso, OptimizerKind::ff}) {
        const auto config = knn_selection(kind, 7);
        const auto result = select_features(d, config);
        const auto holdout = selection_holdout(d, config);
        const auto spec = selection_spec(holdout, config);
        EXPECT_EQ(result.accuracy, wrapper_fitness(result.position, spec)) << to_string(kind);
        EXPECT_EQ(result.mask.to_string(), decode_mask(result.position).to_string());
        const auto& t = result.trace.best_fitness_per_iteration;
        ASSERT_EQ(t.size(), config.iterations + 1);
        for (std::size_t i = 1; i < t.size(); ++i) {
            EXPECT_GE(t[i], t[i - 1]);
        }
        EXPECT_EQ(t.back(), result.accuracy);
    }
}

TEST(SelectFeatures, NoneReturnsAllFeatures) {
    const auto d = make_synthetic({});
    const auto result = select_features(d, knn_selection(OptimizerKind::none, 1));
    EXPECT_EQ(result.mask.count, d.cols);
    EXPECT_EQ(result.trace.evaluations, 1u);
}

TEST(SelectFeatures, ZeroIterationsIsConfigError) {
    auto config = knn_selection(OptimizerKind::cbo, 1);
    config.iterations = 0;
    EXPECT_THROW(select_features(make_synthetic({}), config), ConfigError);
}

TEST(SelectFeatures, KnnWrapperFindsInformativeColumns) {
    const auto d = make_synthetic({});
    auto config = knn_selection(OptimizerKind::cbo, 5);
    config.population = 10;
    config.iterations = 15;
    const auto result = select_features(d, config);
    EXPECT_TRUE(result.mask.included[2]);
    EXPECT_TRUE(result.mask.included[7]);
}

TEST(SelectionJson, RoundTrip) {
    const auto d = make_synthetic({});
    const auto result = select_features(d, knn_selection(OptimizerKind::pso, 2));
    const auto text = selection_to_json(result);
    const auto back = selection_from_json(text);
    EXPECT_EQ(back.mask.to_string(), result.mask.to_string());
    EXPECT_EQ(back.accuracy, result.accuracy);
    EXPECT_EQ(back.position, result.position);
    EXPECT_EQ(back.trace.best_fitness_per_iteration, result.trace.best_fitness_per_iteration);
    EXPECT_EQ(selection_to_json(back), text);
    EXPECT_THROW(selection_from_json("{\"mask\": 3}"), ParseError);
    EXPECT_THROW(selection_from_json("not json"), ParseError);
}

TEST(OptimizerNames, ParseAndPrint) {
    EXPECT_EQ(parse_optimizer("firefly"), OptimizerKind::ff);
    EXPECT_EQ(to_string(OptimizerKind::cbo), "cbo");
    EXPECT_THROW(parse_optimizer("ga"), ConfigError);
}
