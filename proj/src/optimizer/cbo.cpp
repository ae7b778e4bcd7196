// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbosel/errors.hpp"
#include "cbosel/optimizer.hpp"
#include "trace_recorder.hpp"

namespace cbosel {

std::vector<CollidingBody> initialize_population(const CboConfig& config, Rng& rng) {
    config.validate();
    const auto& box = config.bounds;
    std::vector<CollidingBody> bodies(config.population);
    for (auto& body : bodies) {
        body.position.resize(box.dim());
        body.velocity.assign(box.dim(), 0.0);
        for (std::size_t d = 0; d < box.dim(); ++d) {
            body.position[d] = box.lower[d] + rng.uniform01() * (box.upper[d] - box.lower[d]);
        }
        box.clamp(body.position);
    }
    return bodies;
}

void compute_masses(std::span<CollidingBody> bodies, Sense sense) {
    if (bodies.empty()) {
        return;
    }
    std::vector<double> weight(bodies.size());
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        const double f = bodies[i].fitness;
        if (sense == Sense::minimize) {
            weight[i] = 1.0 / std::max(f, kMassFitnessFloor);
        } else {
            // Maximizing f is minimizing 1/f, whose reciprocal weight is f itself.
            weight[i] = std::max(f, 0.0);
        }
    }
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        for (auto& body : bodies) {
            body.mass = 1.0 / static_cast<double>(bodies.size());
        }
        return;
    }
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        bodies[i].mass = weight[i] / total;
    }
}

void sort_and_pair(std::vector<CollidingBody>& bodies, Sense sense) {
    std::stable_sort(bodies.begin(), bodies.end(), [sense](const CollidingBody& a, const CollidingBody& b) {
        return better(sense, a.fitness, b.fitness);
    });
}

void pre_collision_velocities(std::span<CollidingBody> bodies) {
    const std::size_t half = bodies.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
        auto& stationary = bodies[k];
        auto& moving = bodies[k + half];
        std::fill(stationary.velocity.begin(), stationary.velocity.end(), 0.0);
        moving.velocity.resize(moving.position.size());
        for (std::size_t d = 0; d < moving.position.size(); ++d) {
            moving.velocity[d] = moving.position[d] - stationary.position[d];
        }
    }
}

double cor_schedule(std::size_t iteration, std::size_t max_iterations) {
    if (max_iterations == 0) {
        throw ConfigError("max_iterations must be positive");
    }
    if (iteration > max_iterations) {
        throw ConfigError("iteration exceeds max_iterations");
    }
    return 1.0 - static_cast<double>(iteration) / static_cast<double>(max_iterations);
}

CollisionFactors collision_factors(double moving_mass, double stationary_mass, double cor) {
    const double total = moving_mass + stationary_mass;
    return {(moving_mass - cor * stationary_mass) / total, (moving_mass + cor * moving_mass) / total};
}

void post_collision_velocities(std::span<CollidingBody> bodies, double cor) {
    const std::size_t half = bodies.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
        auto& stationary = bodies[k];
        auto& moving = bodies[k + half];
        const auto f = collision_factors(moving.mass, stationary.mass, cor);
        stationary.velocity.resize(moving.velocity.size());
        for (std::size_t d = 0; d < moving.velocity.size(); ++d) {
            const double v = moving.velocity[d];
            stationary.velocity[d] = f.stationary * v;
            moving.velocity[d] = f.moving * v;
        }
    }
}

void update_positions(std::span<CollidingBody> bodies, const BoundsBox& bounds, Rng& rng) {
    const std::size_t half = bodies.size() / 2;
    std::vector<std::vector<double>> next(bodies.size());
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        // Moving bodies restart from the old position of their stationary partner.
        const auto& origin = i < half ? bodies[i].position : bodies[i - half].position;
        const auto& velocity = bodies[i].velocity;
        next[i].resize(origin.size());
        for (std::size_t d = 0; d < origin.size(); ++d) {
            next[i][d] = origin[d] + rng.uniform(-1.0, 1.0) * velocity[d];
        }
        bounds.clamp(next[i]);
    }
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        bodies[i].position = std::move(next[i]);
    }
}

namespace {

void evaluate_bodies(const ObjectiveSpec& objective, std::vector<CollidingBody>& bodies, std::size_t jobs,
                     detail::TraceRecorder& recorder) {
    std::vector<std::vector<double>> positions;
    positions.reserve(bodies.size());
    for (const auto& body : bodies) {
        positions.push_back(body.position);
    }
    const auto fitness = evaluate_batch(objective, positions, jobs);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        bodies[i].fitness = fitness[i];
    }
    recorder.offer(positions, fitness);
    recorder.end_iteration();
}

} // namespace

OptimizationTrace run_cbo(const ObjectiveSpec& objective, const CboConfig& config) {
    config.validate();
    if (!objective.evaluate) {
        throw ConfigError("objective has no evaluate function");
    }
    Rng rng(config.seed);
    detail::TraceRecorder recorder(objective.sense);

    auto bodies = initialize_population(config, rng);
    evaluate_bodies(objective, bodies, config.jobs, recorder);

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        compute_masses(bodies, objective.sense);
        sort_and_pair(bodies, objective.sense);
        pre_collision_velocities(bodies);
        post_collision_velocities(bodies, cor_schedule(iter, config.max_iterations));
        update_positions(bodies, config.bounds, rng);
        evaluate_bodies(objective, bodies, config.jobs, recorder);
    }
    return std::move(recorder).finish();
}

} // namespace cbosel
