// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "cbosel/errors.hpp"
#include "cbosel/optimizer.hpp"
#include "trace_recorder.hpp"

namespace cbosel {

void pso_step(std::span<double> position, std::span<double> velocity, std::span<const double> personal_best,
              std::span<const double> global_best, const PsoConfig& config, Rng& rng) {
    const auto& box = config.bounds;
    for (std::size_t d = 0; d < position.size(); ++d) {
        const double range = box.upper[d] - box.lower[d];
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        double v = config.inertia * velocity[d] + config.cognitive * r1 * (personal_best[d] - position[d]) +
                   config.social * r2 * (global_best[d] - position[d]);
        v = std::clamp(v, -range, range);
        velocity[d] = v;
        position[d] = std::clamp(position[d] + v, box.lower[d], box.upper[d]);
    }
}

OptimizationTrace run_pso(const ObjectiveSpec& objective, const PsoConfig& config) {
    config.validate();
    if (!objective.evaluate) {
        throw ConfigError("objective has no evaluate function");
    }
    const auto& box = config.bounds;
    const std::size_t n = config.population;
    Rng rng(config.seed);
    detail::TraceRecorder recorder(objective.sense);

    std::vector<std::vector<double>> position(n, std::vector<double>(box.dim()));
    std::vector<std::vector<double>> velocity(n, std::vector<double>(box.dim()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < box.dim(); ++d) {
            const double range = box.upper[d] - box.lower[d];
            position[i][d] = box.lower[d] + rng.uniform01() * range;
            velocity[i][d] = rng.uniform(-range, range);
        }
        box.clamp(position[i]);
    }

    auto fitness = evaluate_batch(objective, position, config.jobs);
    recorder.offer(position, fitness);
    recorder.end_iteration();

    auto personal_best = position;
    auto personal_fitness = fitness;
    std::size_t leader = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (better(objective.sense, personal_fitness[i], personal_fitness[leader])) {
            leader = i;
        }
    }
    std::vector<double> global_best = personal_best[leader];
    double global_fitness = personal_fitness[leader];

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            pso_step(position[i], velocity[i], personal_best[i], global_best, config, rng);
        }
        fitness = evaluate_batch(objective, position, config.jobs);
        recorder.offer(position, fitness);
        recorder.end_iteration();

        for (std::size_t i = 0; i < n; ++i) {
            if (better(objective.sense, fitness[i], personal_fitness[i])) {
                personal_fitness[i] = fitness[i];
                personal_best[i] = position[i];
            }
            if (better(objective.sense, personal_fitness[i], global_fitness)) {
                global_fitness = personal_fitness[i];
                global_best = personal_best[i];
            }
        }
    }
    return std::move(recorder).finish();
}

} // namespace cbosel
