// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cbosel/errors.hpp"
#include "cbosel/kernels.hpp"
#include "cbosel/optimizer.hpp"

namespace cbosel {

BoundsBox BoundsBox::uniform(std::size_t dim, double lo, double hi) {
    return BoundsBox{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

void BoundsBox::validate() const {
    if (lower.empty()) {
        throw ConfigError("bounds must have at least one dimension");
    }
    if (lower.size() != upper.size()) {
        throw ConfigError("bounds lower/upper size mismatch");
    }
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!(lower[d] < upper[d]) || !std::isfinite(lower[d]) || !std::isfinite(upper[d])) {
            throw ConfigError("bounds require finite lower < upper in dimension " + std::to_string(d));
        }
    }
}

void BoundsBox::clamp(std::span<double> position) const {
    for (std::size_t d = 0; d < position.size(); ++d) {
        position[d] = std::clamp(position[d], lower[d], upper[d]);
    }
}

bool BoundsBox::contains(std::span<const double> position) const {
    if (position.size() != dim()) {
        return false;
    }
    for (std::size_t d = 0; d < position.size(); ++d) {
        if (position[d] < lower[d] || position[d] > upper[d]) {
            return false;
        }
    }
    return true;
}

namespace {

void validate_common(std::size_t population, std::size_t max_iterations, const BoundsBox& bounds) {
    if (population < 1) {
        throw ConfigError("population must be positive");
    }
    if (max_iterations == 0) {
        throw ConfigError("max_iterations must be positive");
    }
    bounds.validate();
}

void require_nonnegative(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) {
        throw ConfigError(std::string(name) + " must be finite and >= 0");
    }
}

std::string format_position(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t i = 0; i < x.size(); ++i) {
        os << (i ? ", " : "") << x[i];
    }
    os << ']';
    return os.str();
}

} // namespace

void CboConfig::validate() const {
    validate_common(population, max_iterations, bounds);
    if (population < 2 || population % 2 != 0) {
        throw ConfigError("CBO population must be even and >= 2 (got " + std::to_string(population) + ")");
    }
}

void PsoConfig::validate() const {
    validate_common(population, max_iterations, bounds);
    require_nonnegative(inertia, "inertia");
    require_nonnegative(cognitive, "cognitive");
    require_nonnegative(social, "social");
}

void FfConfig::validate() const {
    validate_common(population, max_iterations, bounds);
    require_nonnegative(beta0, "beta0");
    require_nonnegative(gamma, "gamma");
    require_nonnegative(alpha, "alpha");
}

std::vector<double> evaluate_batch(const ObjectiveSpec& objective, std::span<const std::vector<double>> positions,
                                   std::size_t jobs) {
    std::vector<double> out(positions.size());
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, positions.size());

    if (jobs <= 1) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            out[i] = objective.evaluate(positions[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < positions.size(); i = next.fetch_add(1)) {
                try {
                    out[i] = objective.evaluate(positions[i]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        };
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        pool.clear();
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!std::isfinite(out[i])) {
            throw ObjectiveError("objective returned a non-finite value at position " + format_position(positions[i]));
        }
    }
    return out;
}

double sphere(std::span<const double> x) { return kernels::dot(x, x); }

double rastrigin(std::span<const double> x) {
    double sum = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    }
    return sum;
}

double rosenbrock(std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

BenchmarkFunction benchmark_function(const std::string& name) {
    if (name == "sphere") {
        return {name, &sphere, -5.0, 5.0};
    }
    if (name == "rastrigin") {
        return {name, &rastrigin, -5.12, 5.12};
    }
    if (name == "rosenbrock") {
        return {name, &rosenbrock, -2.048, 2.048};
    }
    throw ConfigError("unknown benchmark function '" + name + "' (expected sphere, rastrigin or rosenbrock)");
}

} // namespace cbosel
