// SPDX-License-Identifier: Apache-2.0
#include "cbosel/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cbosel::kernels {

namespace {

struct KernelTable {
    Isa isa;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
};

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::axpy, &scalar::squared_distance};
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::axpy, &avx2::squared_distance};
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::axpy, &neon::squared_distance};

const KernelTable* table_for(Isa isa) {
    switch (isa) {
    case Isa::avx2:
        return &kAvx2;
    case Isa::neon:
        return &kNeon;
    case Isa::scalar:
        break;
    }
    return &kScalar;
}

const KernelTable* detect() {
    if (const char* forced = std::getenv("CBOSEL_SIMD"); forced && std::string(forced) == "scalar") {
        return &kScalar;
    }
    if (isa_supported(Isa::avx2)) {
        return &kAvx2;
    }
    if (isa_supported(Isa::neon)) {
        return &kNeon;
    }
    return &kScalar;
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> table{detect()};
    return table;
}

inline const KernelTable& kt() { return *active().load(std::memory_order_relaxed); }

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::avx2:
        return "avx2";
    case Isa::neon:
        return "neon";
    case Isa::scalar:
        break;
    }
    return "scalar";
}

bool isa_supported(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(CBOSEL_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(CBOSEL_HAVE_NEON) && defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa() { return kt().isa; }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("kernel variant not supported on this machine: " + std::string(isa_name(isa)));
    }
    active().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return kt().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    kt().axpy(alpha, x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return kt().squared_distance(a.data(), b.data(), a.size());
}

void gemv_acc(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
              std::span<double> y) {
    assert(m.size() == rows * cols && x.size() == cols && y.size() == rows);
    const auto& t = kt();
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] += t.dot(m.data() + r * cols, x.data(), cols);
    }
}

void gemv_t_acc(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
                std::span<double> y) {
    assert(m.size() == rows * cols && x.size() == rows && y.size() == cols);
    const auto& t = kt();
    for (std::size_t r = 0; r < rows; ++r) {
        if (x[r] != 0.0) {
            t.axpy(x[r], m.data() + r * cols, y.data(), cols);
        }
    }
}

void ger(double alpha, std::span<const double> x, std::span<const double> y, std::span<double> m) {
    assert(m.size() == x.size() * y.size());
    const auto& t = kt();
    const std::size_t cols = y.size();
    for (std::size_t r = 0; r < x.size(); ++r) {
        const double scale = alpha * x[r];
        if (scale != 0.0) {
            t.axpy(scale, y.data(), m.data() + r * cols, cols);
        }
    }
}

} // namespace cbosel::kernels
