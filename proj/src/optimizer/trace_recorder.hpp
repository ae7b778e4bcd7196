// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "cbosel/optimizer.hpp"

namespace cbosel::detail {

// Global elite kept outside the population, so a run's answer is the best
// position ever evaluated even when the algorithm itself drops it.
class TraceRecorder {
public:
    explicit TraceRecorder(Sense sense) : sense_(sense) {}

    void offer(std::span<const std::vector<double>> positions, std::span<const double> fitness) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (!has_best_ || better(sense_, fitness[i], trace_.best_fitness)) {
                has_best_ = true;
                trace_.best_fitness = fitness[i];
                trace_.best_position = positions[i];
            }
        }
        trace_.evaluations += positions.size();
    }

    void end_iteration() { trace_.best_fitness_per_iteration.push_back(trace_.best_fitness); }

    OptimizationTrace finish() && { return std::move(trace_); }

private:
    Sense sense_;
    bool has_best_ = false;
    OptimizationTrace trace_;
};

} // namespace cbosel::detail
