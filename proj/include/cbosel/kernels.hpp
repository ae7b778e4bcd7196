// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense double-precision inner loops shared by the classifiers and the
// optimizers. Every kernel has a scalar reference implementation; wider
// variants (AVX2+FMA on x86-64, NEON on AArch64) are selected once at
// startup from the CPU's capabilities. Setting CBOSEL_SIMD=scalar in the
// environment forces the reference path.
//
// The vector variants reassociate sums, so results agree with the scalar
// path to rounding, not bitwise. Within one process the selection is fixed,
// which keeps seeded runs reproducible on a given machine.

#include <cstddef>
#include <span>
#include <string_view>

namespace cbosel::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// The variant currently used by the dispatching entry points.
Isa active_isa();

/// Whether `isa` can run on this machine.
bool isa_supported(Isa isa);

/// Switches the dispatch target. Not synchronized with concurrent kernel
/// calls; intended for tests and the CLI's startup path.
void set_active_isa(Isa isa);

/// Σ a[i]·b[i]. Sizes must match.
double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha·x. Sizes must match.
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Σ (a[i] − b[i])².
double squared_distance(std::span<const double> a, std::span<const double> b);

/// y += M·x for a row-major rows×cols matrix.
void gemv_acc(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
              std::span<double> y);

/// y += Mᵀ·x for a row-major rows×cols matrix (x has `rows` entries, y has `cols`).
void gemv_t_acc(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
                std::span<double> y);

/// M += alpha·x·yᵀ (rank-one update), M row-major rows×cols.
void ger(double alpha, std::span<const double> x, std::span<const double> y, std::span<double> m);

// Per-ISA entry points. The dispatching functions above forward to one of
// these; tests call them directly to compare variants.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
} // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
} // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
} // namespace neon

} // namespace cbosel::kernels
