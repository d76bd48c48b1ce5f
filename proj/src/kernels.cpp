#include "lrsc/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace lrsc::kernels {

// ====== Scalar reference kernels ======

namespace scalar {

void clamp(const double* x, std::size_t n, double lo, double hi, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    if (v < lo) v = lo;
    if (v > hi) v = hi;
    out[i] = v;
  }
}

void shift(const double* x, std::size_t n, double c, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + c;
}

void scale(const double* x, std::size_t n, double a, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void add(const double* x, const double* y, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void sub(const double* x, const double* y, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void axpby(double a, const double* x, double b, const double* y, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    double m = std::fabs(v) - tau;
    out[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void soft_threshold_masked(const double* x, const std::uint8_t* mask, std::size_t n,
                           double tau, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    if (mask[i]) {
      double m = std::fabs(v) - tau;
      v = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
    }
    out[i] = v;
  }
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double abs_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double inf_norm(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double diff_sq_sum(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) acc += x[i];
  }
  return acc;
}

void matvec(const double* a, const double* x, int n, double* y) {
  for (int i = 0; i < n; ++i) y[i] = dot(a + std::size_t(i) * n, x, std::size_t(n));
}

}  // namespace scalar

// ====== Runtime dispatch ======

namespace {

struct Table {
  void (*clamp)(const double*, std::size_t, double, double, double*);
  void (*shift)(const double*, std::size_t, double, double*);
  void (*scale)(const double*, std::size_t, double, double*);
  void (*add)(const double*, const double*, std::size_t, double*);
  void (*sub)(const double*, const double*, std::size_t, double*);
  void (*axpby)(double, const double*, double, const double*, std::size_t, double*);
  void (*soft_threshold)(const double*, std::size_t, double, double*);
  void (*soft_threshold_masked)(const double*, const std::uint8_t*, std::size_t, double, double*);
  double (*sum)(const double*, std::size_t);
  double (*abs_sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*inf_norm)(const double*, std::size_t);
  double (*diff_sq_sum)(const double*, const double*, std::size_t);
  double (*masked_sum)(const double*, const std::uint8_t*, std::size_t);
  void (*matvec)(const double*, const double*, int, double*);
  Isa isa;
};

constexpr Table kScalarTable = {
    scalar::clamp, scalar::shift, scalar::scale, scalar::add, scalar::sub,
    scalar::axpby, scalar::soft_threshold, scalar::soft_threshold_masked,
    scalar::sum, scalar::abs_sum, scalar::dot, scalar::inf_norm,
    scalar::diff_sq_sum, scalar::masked_sum, scalar::matvec, Isa::scalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2Table = {
    avx2::clamp, avx2::shift, avx2::scale, avx2::add, avx2::sub,
    avx2::axpby, avx2::soft_threshold, avx2::soft_threshold_masked,
    avx2::sum, avx2::abs_sum, avx2::dot, avx2::inf_norm,
    avx2::diff_sq_sum, avx2::masked_sum, avx2::matvec, Isa::avx2};

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") != 0; }
#else
bool cpu_has_avx2() { return false; }
#endif

const Table* pick_default() {
  const char* env = std::getenv("LRSC_KERNEL_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) {
    if (env == nullptr || std::strcmp(env, "avx2") == 0) return &kAvx2Table;
  }
#endif
  return &kScalarTable;
}

std::atomic<const Table*>& table_slot() {
  static std::atomic<const Table*> slot{pick_default()};
  return slot;
}

const Table& table() { return *table_slot().load(std::memory_order_relaxed); }

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  return cpu_has_avx2();
}

Isa active_isa() { return table().isa; }

void force_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument(std::string("kernel ISA not available: ") + isa_name(isa));
  if (isa == Isa::scalar) {
    table_slot().store(&kScalarTable, std::memory_order_relaxed);
    return;
  }
#if defined(__x86_64__) || defined(_M_X64)
  table_slot().store(&kAvx2Table, std::memory_order_relaxed);
#endif
}

// ====== Dispatched entry points ======

void clamp(const double* x, std::size_t n, double lo, double hi, double* out) {
  table().clamp(x, n, lo, hi, out);
}
void shift(const double* x, std::size_t n, double c, double* out) { table().shift(x, n, c, out); }
void scale(const double* x, std::size_t n, double a, double* out) { table().scale(x, n, a, out); }
void add(const double* x, const double* y, std::size_t n, double* out) {
  table().add(x, y, n, out);
}
void sub(const double* x, const double* y, std::size_t n, double* out) {
  table().sub(x, y, n, out);
}
void axpby(double a, const double* x, double b, const double* y, std::size_t n, double* out) {
  table().axpby(a, x, b, y, n, out);
}
void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  table().soft_threshold(x, n, tau, out);
}
void soft_threshold_masked(const double* x, const std::uint8_t* mask, std::size_t n, double tau,
                           double* out) {
  table().soft_threshold_masked(x, mask, n, tau, out);
}
double sum(const double* x, std::size_t n) { return table().sum(x, n); }
double abs_sum(const double* x, std::size_t n) { return table().abs_sum(x, n); }
double dot(const double* x, const double* y, std::size_t n) { return table().dot(x, y, n); }
double inf_norm(const double* x, std::size_t n) { return table().inf_norm(x, n); }
double diff_sq_sum(const double* x, const double* y, std::size_t n) {
  return table().diff_sq_sum(x, y, n);
}
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
  return table().masked_sum(x, mask, n);
}
void matvec(const double* a, const double* x, int n, double* y) { table().matvec(a, x, n, y); }

}  // namespace lrsc::kernels
