// SPDX-License-Identifier: Apache-2.0
#pragma once

// Population-based continuous optimizers over a box: Colliding Bodies
// Optimization (CBO) plus particle swarm, firefly and random-search
// baselines. All four share ObjectiveSpec and OptimizationTrace so they can
// be swapped behind the feature-selection wrapper and the benchmark harness.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cbosel/random.hpp"

namespace cbosel {

enum class Sense { minimize, maximize };

/// true when `a` is strictly better than `b` in `sense`.
inline bool better(Sense sense, double a, double b) { return sense == Sense::minimize ? a < b : a > b; }

struct BoundsBox {
    std::vector<double> lower;
    std::vector<double> upper;

    static BoundsBox uniform(std::size_t dim, double lo, double hi);

    std::size_t dim() const { return lower.size(); }

    /// Throws ConfigError unless dim ≥ 1, sizes agree, and lower[d] < upper[d].
    void validate() const;

    /// Componentwise clamp into the box.
    void clamp(std::span<double> position) const;

    bool contains(std::span<const double> position) const;
};

struct ObjectiveSpec {
    /// Must be deterministic and reentrant: batches are evaluated on a worker pool.
    std::function<double(std::span<const double>)> evaluate;
    Sense sense = Sense::minimize;
};

struct CollidingBody {
    std::vector<double> position;
    std::vector<double> velocity;
    double mass = 0.0;
    double fitness = 0.0;
};

struct CboConfig {
    std::size_t population = 10;
    std::size_t max_iterations = 25;
    std::uint64_t seed = 0;
    BoundsBox bounds;
    /// Worker threads for objective evaluation; 0 = hardware concurrency.
    std::size_t jobs = 1;

    void validate() const;
};

struct PsoConfig {
    std::size_t population = 10;
    std::size_t max_iterations = 25;
    std::uint64_t seed = 0;
    BoundsBox bounds;
    std::size_t jobs = 1;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;

    void validate() const;
};

struct FfConfig {
    std::size_t population = 10;
    std::size_t max_iterations = 25;
    std::uint64_t seed = 0;
    BoundsBox bounds;
    std::size_t jobs = 1;
    double beta0 = 1.0;
    double gamma = 1.0;
    /// Step size as a fraction of each dimension's range; halved after every
    /// quarter of the run.
    double alpha = 0.25;

    void validate() const;
};

struct OptimizationTrace {
    /// Best-so-far after initialization (entry 0) and after every iteration.
    std::vector<double> best_fitness_per_iteration;
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;
};

// --- CBO building blocks -------------------------------------------------

/// Uniform random positions in the box (one draw per component), zero
/// velocities. Fitness is left for the caller to evaluate.
std::vector<CollidingBody> initialize_population(const CboConfig& config, Rng& rng);

/// Fitness values at or below this are clamped before taking reciprocals.
inline constexpr double kMassFitnessFloor = 1e-12;

/// Assigns normalized masses from fitness: better bodies are heavier and
/// the masses sum to one.
void compute_masses(std::span<CollidingBody> bodies, Sense sense);

/// Stable sort best-first. Afterwards bodies[k] (k < N/2) is stationary and
/// bodies[k + N/2] is the moving body that collides with it.
void sort_and_pair(std::vector<CollidingBody>& bodies, Sense sense);

/// Stationary half gets zero velocity; moving body k + N/2 gets
/// X[k + N/2] − X[k].
void pre_collision_velocities(std::span<CollidingBody> bodies);

/// Coefficient of restitution: 1 − iteration / max_iterations.
double cor_schedule(std::size_t iteration, std::size_t max_iterations);

struct CollisionFactors {
    double moving;     ///< moving velocity after = moving · v
    double stationary; ///< stationary velocity after = stationary · v
};

/// One-dimensional collision of a moving body (mass `moving_mass`, velocity v)
/// with a body at rest. Conserves momentum for every ε.
CollisionFactors collision_factors(double moving_mass, double stationary_mass, double cor);

/// Replaces each body's velocity with its post-collision velocity.
void post_collision_velocities(std::span<CollidingBody> bodies, double cor);

/// Moves every body using uniform [−1, 1] per-component factors and clamps
/// into the box. Moving bodies restart from their partner's old position.
void update_positions(std::span<CollidingBody> bodies, const BoundsBox& bounds, Rng& rng);

// --- Baseline update rules ---------------------------------------------------

/// Global-best PSO velocity/position update for one particle. The velocity is
/// limited to the box range per dimension and the position clamped to the box.
void pso_step(std::span<double> position, std::span<double> velocity, std::span<const double> personal_best,
              std::span<const double> global_best, const PsoConfig& config, Rng& rng);

/// Moves firefly `x` toward the brighter `brighter` with attractiveness
/// beta0·exp(−gamma·r²), r measured in range-normalized coordinates, plus a
/// uniform step of ±alpha/2 of each dimension's range. Clamps to the box.
void firefly_move(std::span<double> x, std::span<const double> brighter, const BoundsBox& bounds, double beta0,
                  double gamma, double alpha, Rng& rng);

/// Randomization term only (no brighter firefly exists).
void firefly_random_walk(std::span<double> x, const BoundsBox& bounds, double alpha, Rng& rng);

// --- Runners ----------------------------------------------------------------

OptimizationTrace run_cbo(const ObjectiveSpec& objective, const CboConfig& config);
OptimizationTrace run_pso(const ObjectiveSpec& objective, const PsoConfig& config);
OptimizationTrace run_firefly(const ObjectiveSpec& objective, const FfConfig& config);

/// Uniform sampling with `population` draws per iteration, so its trace lines
/// up with the population-based runners at equal evaluation budget.
OptimizationTrace run_random_search(const ObjectiveSpec& objective, const BoundsBox& bounds,
                                    std::size_t population, std::size_t max_iterations, std::uint64_t seed);

/// Evaluates every position, possibly in parallel, and checks finiteness.
/// Results are placed by index so the worker count never changes them.
std::vector<double> evaluate_batch(const ObjectiveSpec& objective, std::span<const std::vector<double>> positions,
                                   std::size_t jobs);

// --- Closed-form test functions ---------------------------------------------

double sphere(std::span<const double> x);
double rastrigin(std::span<const double> x);
double rosenbrock(std::span<const double> x);

struct BenchmarkFunction {
    std::string name;
    std::function<double(std::span<const double>)> fn;
    double lower;
    double upper;
};

/// sphere [−5, 5], rastrigin [−5.12, 5.12], rosenbrock [−2.048, 2.048].
/// Throws ConfigError for unknown names.
BenchmarkFunction benchmark_function(const std::string& name);

} // namespace cbosel
