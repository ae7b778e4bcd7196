// SPDX-License-Identifier: Apache-2.0
#include "cbosel/feature_selection.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <mutex>
#include "json.hpp"

#include "cbosel/errors.hpp"

namespace cbosel {

FeatureMask FeatureMask::all(std::size_t features) {
    if (features == 0) {
        throw std::invalid_argument("mask over zero features");
    }
    return FeatureMask{std::vector<bool>(features, true), features};
}

FeatureMask FeatureMask::from_bits(std::vector<bool> bits) {
    FeatureMask m;
    m.count = static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
    if (m.count == 0) {
        throw std::invalid_argument("feature mask selects no features");
    }
    m.included = std::move(bits);
    return m;
}

std::vector<std::size_t> FeatureMask::columns() const {
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t d = 0; d < included.size(); ++d) {
        if (included[d]) {
            out.push_back(d);
        }
    }
    return out;
}

std::string FeatureMask::to_string() const {
    std::string s;
    s.reserve(included.size());
    for (bool b : included) {
        s += b ? '1' : '0';
    }
    return s;
}

FeatureMask decode_mask(std::span<const double> position, double threshold) {
    if (position.empty()) {
        throw std::invalid_argument("cannot decode a mask from an empty position");
    }
    std::vector<bool> bits(position.size());
    std::size_t best = 0;
    bool any = false;
    for (std::size_t d = 0; d < position.size(); ++d) {
        bits[d] = position[d] >= threshold;
        any = any || bits[d];
        if (position[d] > position[best]) {
            best = d;
        }
    }
    if (!any) {
        bits[best] = true;
    }
    return FeatureMask::from_bits(std::move(bits));
}

void WrapperFitnessSpec::validate() const {
    if (!train || !validation || train->rows == 0 || validation->rows == 0) {
        throw ConfigError("wrapper fitness needs nonempty train and validation splits");
    }
    if (train->cols != validation->cols) {
        throw ConfigError("train and validation splits have different column counts");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError("mask threshold must be in (0, 1)");
    }
}

std::uint64_t mask_seed(std::uint64_t master, const FeatureMask& mask) {
    // FNV-1a over the mask bits.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (bool b : mask.included) {
        h ^= b ? 0x31u : 0x30u;
        h *= 0x100000001b3ULL;
    }
    return combine_seeds(master, h);
}

double mask_fitness(const FeatureMask& mask, const WrapperFitnessSpec& spec) {
    spec.validate();
    if (mask.size() != spec.train->cols) {
        throw std::invalid_argument("mask length does not match the dataset's feature count");
    }
    const auto columns = mask.columns();
    const auto train = project_columns(*spec.train, columns);
    const auto validation = project_columns(*spec.validation, columns);
    try {
        const auto predicted = fit_predict(spec.classifier, train, validation, mask_seed(spec.seed, mask));
        std::size_t correct = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            correct += predicted[i] == validation.labels[i];
        }
        return static_cast<double>(correct) / static_cast<double>(validation.rows);
    } catch (const DivergenceError& e) {
        static std::mutex log_mutex;
        std::lock_guard lock(log_mutex);
        std::cerr << "warning: classifier diverged for mask " << mask.to_string() << " (" << e.what()
                  << "); scoring 0\n";
        return 0.0;
    }
}

double wrapper_fitness(std::span<const double> position, const WrapperFitnessSpec& spec) {
    return mask_fitness(decode_mask(position, spec.threshold), spec);
}

std::string_view to_string(OptimizerKind kind) {
    switch (kind) {
    case OptimizerKind::pso:
        return "pso";
    case OptimizerKind::ff:
        return "ff";
    case OptimizerKind::none:
        return "none";
    case OptimizerKind::cbo:
        break;
    }
    return "cbo";
}

OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "cbo") {
        return OptimizerKind::cbo;
    }
    if (name == "pso") {
        return OptimizerKind::pso;
    }
    if (name == "ff" || name == "firefly") {
        return OptimizerKind::ff;
    }
    if (name == "none") {
        return OptimizerKind::none;
    }
    throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected cbo, pso, ff or none)");
}

Holdout selection_holdout(const LabeledDataset& train_portion, const SelectionConfig& config) {
    SplitSpec split;
    split.learning_percentage = config.holdout_learning_percentage;
    split.seed = combine_seeds(config.seed, 1);
    auto [fit, validation] = split_train_test(train_portion, split);
    return {std::move(fit), std::move(validation)};
}

WrapperFitnessSpec selection_spec(const Holdout& holdout, const SelectionConfig& config) {
    WrapperFitnessSpec spec;
    spec.train = &holdout.fit;
    spec.validation = &holdout.validation;
    spec.classifier = config.classifier;
    spec.threshold = config.threshold;
    spec.seed = combine_seeds(config.seed, 3);
    return spec;
}

SelectionResult select_features(const LabeledDataset& train_portion, const SelectionConfig& config) {
    if (config.iterations == 0) {
        throw ConfigError("iterations must be positive");
    }
    if (config.population == 0) {
        throw ConfigError("population must be positive");
    }
    const auto holdout = selection_holdout(train_portion, config);
    const auto spec = selection_spec(holdout, config);
    spec.validate();
    const std::size_t nf = train_portion.cols;

    SelectionResult result;
    result.seed = config.seed;
    result.optimizer = std::string(to_string(config.optimizer));

    if (config.optimizer == OptimizerKind::none) {
        result.mask = FeatureMask::all(nf);
        result.position.assign(nf, 1.0);
        result.accuracy = mask_fitness(result.mask, spec);
        result.trace.best_fitness = result.accuracy;
        result.trace.best_position = result.position;
        result.trace.best_fitness_per_iteration = {result.accuracy};
        result.trace.evaluations = 1;
        return result;
    }

    // Scores depend only on the mask, so repeated masks reuse earlier results.
    std::map<std::vector<bool>, double> cache;
    std::mutex cache_mutex;
    ObjectiveSpec objective;
    objective.sense = Sense::maximize;
    objective.evaluate = [&](std::span<const double> position) {
        const auto mask = decode_mask(position, spec.threshold);
        {
            std::lock_guard lock(cache_mutex);
            if (auto it = cache.find(mask.included); it != cache.end()) {
                return it->second;
            }
        }
        const double acc = mask_fitness(mask, spec);
        std::lock_guard lock(cache_mutex);
        cache.emplace(mask.included, acc);
        return acc;
    };

    const auto bounds = BoundsBox::uniform(nf, 0.0, 1.0);
    const auto opt_seed = combine_seeds(config.seed, 2);
    switch (config.optimizer) {
    case OptimizerKind::cbo: {
        CboConfig c;
        c.population = config.population;
        c.max_iterations = config.iterations;
        c.seed = opt_seed;
        c.bounds = bounds;
        c.jobs = config.jobs;
        result.trace = run_cbo(objective, c);
        break;
    }
    case OptimizerKind::pso: {
        PsoConfig c;
        c.population = config.population;
        c.max_iterations = config.iterations;
        c.seed = opt_seed;
        c.bounds = bounds;
        c.jobs = config.jobs;
        result.trace = run_pso(objective, c);
        break;
    }
    case OptimizerKind::ff: {
        FfConfig c;
        c.population = config.population;
        c.max_iterations = config.iterations;
        c.seed = opt_seed;
        c.bounds = bounds;
        c.jobs = config.jobs;
        result.trace = run_firefly(objective, c);
        break;
    }
    case OptimizerKind::none:
        break;
    }
    result.position = result.trace.best_position;
    result.mask = decode_mask(result.position, spec.threshold);
    result.accuracy = result.trace.best_fitness;
    return result;
}

std::string selection_to_json(const SelectionResult& result) {
    nlohmann::ordered_json j;
    j["optimizer"] = result.optimizer;
    j["seed"] = result.seed;
    j["accuracy"] = result.accuracy;
    j["feature_count"] = result.mask.size();
    j["selected_count"] = result.mask.count;
    auto& mask = j["mask"] = nlohmann::ordered_json::array();
    for (bool b : result.mask.included) {
        mask.push_back(b ? 1 : 0);
    }
    j["position"] = result.position;
    j["trace"]["best_fitness"] = result.trace.best_fitness_per_iteration;
    j["trace"]["evaluations"] = result.trace.evaluations;
    return j.dump(2) + "\n";
}

SelectionResult selection_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("selection file is not valid JSON: ") + e.what());
    }
    try {
        SelectionResult r;
        std::vector<bool> bits;
        for (const auto& v : j.at("mask")) {
            const int b = v.get<int>();
            if (b != 0 && b != 1) {
                throw ParseError("mask entries must be 0 or 1");
            }
            bits.push_back(b == 1);
        }
        r.mask = FeatureMask::from_bits(std::move(bits));
        r.optimizer = j.value("optimizer", std::string{});
        r.seed = j.value("seed", std::uint64_t{0});
        r.accuracy = j.value("accuracy", 0.0);
        r.position = j.value("position", std::vector<double>{});
        if (j.contains("trace")) {
            r.trace.best_fitness_per_iteration = j["trace"].value("best_fitness", std::vector<double>{});
            r.trace.evaluations = j["trace"].value("evaluations", std::size_t{0});
        }
        r.trace.best_fitness = r.accuracy;
        r.trace.best_position = r.position;
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed selection file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("malformed selection file: ") + e.what());
    }
}

} // namespace cbosel
