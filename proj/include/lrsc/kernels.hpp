#pragma once

// Dense double-precision kernels backing the matrix operations and the
// proximal solvers.  Every kernel has a scalar reference implementation;
// on x86-64 an AVX2 variant is compiled as well and selected at runtime
// when the CPU supports it.  Dispatch can be pinned with force_isa() or
// the LRSC_KERNEL_ISA environment variable ("scalar" / "avx2"), which the
// equivalence tests use to run both paths on identical inputs.
//
// Elementwise kernels produce identical results on every path (the AVX2
// translation unit is built with contraction disabled, so per-lane
// rounding matches the scalar loop).  Reductions may differ by a few ulps
// across paths because the vector lanes reassociate the accumulation;
// each individual path is deterministic.

#include <cstddef>
#include <cstdint>

namespace lrsc::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();

// Pin dispatch to one implementation set.  Throws std::invalid_argument if
// the requested set is not available on this machine.  Not synchronized
// against kernels already running on other threads.
void force_isa(Isa isa);

// ====== Elementwise maps (out may alias any input) ======

void clamp(const double* x, std::size_t n, double lo, double hi, double* out);
void shift(const double* x, std::size_t n, double c, double* out);
void scale(const double* x, std::size_t n, double a, double* out);
void add(const double* x, const double* y, std::size_t n, double* out);
void sub(const double* x, const double* y, std::size_t n, double* out);
void axpby(double a, const double* x, double b, const double* y, std::size_t n, double* out);

// soft_threshold: sign(x) * max(|x| - tau, 0), the l1 proximal map.
void soft_threshold(const double* x, std::size_t n, double tau, double* out);

// Masked variant: entries with mask != 0 are thresholded, the rest copied.
void soft_threshold_masked(const double* x, const std::uint8_t* mask, std::size_t n,
                           double tau, double* out);

// ====== Reductions ======

double sum(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double inf_norm(const double* x, std::size_t n);          // max |x_i|
double diff_sq_sum(const double* x, const double* y, std::size_t n);
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n);

// ====== Matrix-vector product ======

// y = A * x for a dense row-major n-by-n matrix.  y must not alias x or A.
void matvec(const double* a, const double* x, int n, double* y);

// ====== Reference implementations ======
// Always compiled; the dispatch tables point here when no SIMD variant is
// selected.  Exposed so tests can compare paths directly.

namespace scalar {
void clamp(const double* x, std::size_t n, double lo, double hi, double* out);
void shift(const double* x, std::size_t n, double c, double* out);
void scale(const double* x, std::size_t n, double a, double* out);
void add(const double* x, const double* y, std::size_t n, double* out);
void sub(const double* x, const double* y, std::size_t n, double* out);
void axpby(double a, const double* x, double b, const double* y, std::size_t n, double* out);
void soft_threshold(const double* x, std::size_t n, double tau, double* out);
void soft_threshold_masked(const double* x, const std::uint8_t* mask, std::size_t n,
                           double tau, double* out);
double sum(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double inf_norm(const double* x, std::size_t n);
double diff_sq_sum(const double* x, const double* y, std::size_t n);
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n);
void matvec(const double* a, const double* x, int n, double* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void clamp(const double* x, std::size_t n, double lo, double hi, double* out);
void shift(const double* x, std::size_t n, double c, double* out);
void scale(const double* x, std::size_t n, double a, double* out);
void add(const double* x, const double* y, std::size_t n, double* out);
void sub(const double* x, const double* y, std::size_t n, double* out);
void axpby(double a, const double* x, double b, const double* y, std::size_t n, double* out);
void soft_threshold(const double* x, std::size_t n, double tau, double* out);
void soft_threshold_masked(const double* x, const std::uint8_t* mask, std::size_t n,
                           double tau, double* out);
double sum(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double inf_norm(const double* x, std::size_t n);
double diff_sq_sum(const double* x, const double* y, std::size_t n);
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n);
void matvec(const double* a, const double* x, int n, double* y);
}  // namespace avx2
#endif

}  // namespace lrsc::kernels
