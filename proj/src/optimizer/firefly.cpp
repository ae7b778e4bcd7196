// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "cbosel/errors.hpp"
#include "cbosel/optimizer.hpp"
#include "trace_recorder.hpp"

namespace cbosel {

void firefly_move(std::span<double> x, std::span<const double> brighter, const BoundsBox& bounds, double beta0,
                  double gamma, double alpha, Rng& rng) {
    double r2 = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = (x[d] - brighter[d]) / (bounds.upper[d] - bounds.lower[d]);
        r2 += diff * diff;
    }
    const double beta = beta0 * std::exp(-gamma * r2);
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double range = bounds.upper[d] - bounds.lower[d];
        x[d] += beta * (brighter[d] - x[d]) + alpha * (rng.uniform01() - 0.5) * range;
    }
    bounds.clamp(x);
}

void firefly_random_walk(std::span<double> x, const BoundsBox& bounds, double alpha, Rng& rng) {
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] += alpha * (rng.uniform01() - 0.5) * (bounds.upper[d] - bounds.lower[d]);
    }
    bounds.clamp(x);
}

OptimizationTrace run_firefly(const ObjectiveSpec& objective, const FfConfig& config) {
    config.validate();
    if (!objective.evaluate) {
        throw ConfigError("objective has no evaluate function");
    }
    const auto& box = config.bounds;
    const std::size_t n = config.population;
    Rng rng(config.seed);
    detail::TraceRecorder recorder(objective.sense);

    std::vector<std::vector<double>> position(n, std::vector<double>(box.dim()));
    for (auto& x : position) {
        for (std::size_t d = 0; d < box.dim(); ++d) {
            x[d] = box.lower[d] + rng.uniform01() * (box.upper[d] - box.lower[d]);
        }
        box.clamp(x);
    }
    auto fitness = evaluate_batch(objective, position, config.jobs);
    recorder.offer(position, fitness);
    recorder.end_iteration();

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        const auto quarter = (4 * iter) / config.max_iterations;
        const double alpha = config.alpha * std::ldexp(1.0, -static_cast<int>(quarter));

        // Attraction uses the brightness and positions from the start of the iteration.
        const auto snapshot = position;
        for (std::size_t i = 0; i < n; ++i) {
            bool attracted = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && better(objective.sense, fitness[j], fitness[i])) {
                    firefly_move(position[i], snapshot[j], box, config.beta0, config.gamma, alpha, rng);
                    attracted = true;
                }
            }
            if (!attracted) {
                firefly_random_walk(position[i], box, alpha, rng);
            }
        }
        fitness = evaluate_batch(objective, position, config.jobs);
        recorder.offer(position, fitness);
        recorder.end_iteration();
    }
    return std::move(recorder).finish();
}

} // namespace cbosel
