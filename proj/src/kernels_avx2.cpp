// AVX2 variants of the dense kernels.  Main loops process 4 doubles per
// step; tails fall back to the scalar reference so both paths agree on
// every element.  Built with -mavx2 -mfma -ffp-contract=off: elementwise
// kernels use explicit mul/add so each lane rounds exactly like the
// scalar loop, and only the reductions reassociate (4 lanes + horizontal
// fold), which the equivalence tests cover with a tolerance.

#include "lrsc/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace lrsc::kernels::avx2 {

namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

// Expand 4 mask bytes into a 4-lane double-wide mask (all-ones where byte != 0).
inline __m256d mask4(const std::uint8_t* m) {
  std::uint32_t w;
  std::memcpy(&w, m, 4);
  __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(w)));
  return _mm256_castsi256_pd(_mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
}

}  // namespace

// ====== Elementwise maps ======

void clamp(const double* x, std::size_t n, double lo, double hi, double* out) {
  const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_min_pd(_mm256_max_pd(v, vlo), vhi);
    _mm256_storeu_pd(out + i, v);
  }
  scalar::clamp(x + i, n - i, lo, hi, out + i);
}

void shift(const double* x, std::size_t n, double c, double* out) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vc));
  scalar::shift(x + i, n - i, c, out + i);
}

void scale(const double* x, std::size_t n, double a, double* out) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  scalar::scale(x + i, n - i, a, out + i);
}

void add(const double* x, const double* y, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  scalar::add(x + i, y + i, n - i, out + i);
}

void sub(const double* x, const double* y, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  scalar::sub(x + i, y + i, n - i, out + i);
}

void axpby(double a, const double* x, double b, const double* y, std::size_t n, double* out) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    t = _mm256_add_pd(t, _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(out + i, t);
  }
  scalar::axpby(a, x + i, b, y + i, n - i, out + i);
}

void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  const __m256d vtau = _mm256_set1_pd(tau), zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(kSignMask, v), vtau), zero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(v, kSignMask)));
  }
  scalar::soft_threshold(x + i, n - i, tau, out + i);
}

void soft_threshold_masked(const double* x, const std::uint8_t* mask, std::size_t n,
                           double tau, double* out) {
  const __m256d vtau = _mm256_set1_pd(tau), zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(kSignMask, v), vtau), zero);
    __m256d shr = _mm256_or_pd(mag, _mm256_and_pd(v, kSignMask));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(v, shr, mask4(mask + i)));
  }
  scalar::soft_threshold_masked(x + i, mask + i, n - i, tau, out + i);
}

// ====== Reductions ======

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return hsum(acc) + scalar::sum(x + i, n - i);
}

double abs_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(x + i)));
  return hsum(acc) + scalar::abs_sum(x + i, n - i);
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  return hsum(acc) + scalar::dot(x + i, y + i, n - i);
}

double inf_norm(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  double tail = scalar::inf_norm(x + i, n - i);
  return m > tail ? m : tail;
}

double diff_sq_sum(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  return hsum(acc) + scalar::diff_sq_sum(x + i, y + i, n - i);
}

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), mask4(mask + i)));
  return hsum(acc) + scalar::masked_sum(x + i, mask + i, n - i);
}

// ====== Matrix-vector product ======

void matvec(const double* a, const double* x, int n, double* y) {
  for (int i = 0; i < n; ++i) y[i] = dot(a + std::size_t(i) * n, x, std::size_t(n));
}

}  // namespace lrsc::kernels::avx2
