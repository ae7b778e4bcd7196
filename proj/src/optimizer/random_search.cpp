// SPDX-License-Identifier: Apache-2.0
#include "cbosel/errors.hpp"
#include "cbosel/optimizer.hpp"
#include "trace_recorder.hpp"

namespace cbosel {

OptimizationTrace run_random_search(const ObjectiveSpec& objective, const BoundsBox& bounds,
                                    std::size_t population, std::size_t max_iterations, std::uint64_t seed) {
    bounds.validate();
    if (population == 0) {
        throw ConfigError("population must be positive");
    }
    if (!objective.evaluate) {
        throw ConfigError("objective has no evaluate function");
    }
    Rng rng(seed);
    detail::TraceRecorder recorder(objective.sense);
    std::vector<std::vector<double>> batch(population, std::vector<double>(bounds.dim()));
    for (std::size_t iter = 0; iter <= max_iterations; ++iter) {
        for (auto& x : batch) {
            for (std::size_t d = 0; d < bounds.dim(); ++d) {
                x[d] = bounds.lower[d] + rng.uniform01() * (bounds.upper[d] - bounds.lower[d]);
            }
        }
        const auto fitness = evaluate_batch(objective, batch, 1);
        recorder.offer(batch, fitness);
        recorder.end_iteration();
    }
    return std::move(recorder).finish();
}

} // namespace cbosel
