// Built with -mavx2 -mfma. Nothing here may run before dispatch.cpp has
// confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "tables.hpp"

namespace embq::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= len; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= len; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < len; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

double sum_squares_avx2(const double* a, std::size_t len) { return dot_avx2(a, a, len); }

void axpy_avx2(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < len; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void scale_avx2(double s, double* x, std::size_t len) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
  }
  for (; i < len; ++i) x[i] *= s;
}

// Four rows per pass so each tile of g is loaded and stored once per block.
void gram_upper_avx2(const double* x, std::size_t rows, std::size_t cols, double* g) {
  std::size_t i = 0;
  for (; i + 4 <= rows; i += 4) {
    const double* r0 = x + i * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    for (std::size_t j = 0; j < cols; ++j) {
      const double s0 = r0[j], s1 = r1[j], s2 = r2[j], s3 = r3[j];
      const __m256d a0 = _mm256_set1_pd(s0);
      const __m256d a1 = _mm256_set1_pd(s1);
      const __m256d a2 = _mm256_set1_pd(s2);
      const __m256d a3 = _mm256_set1_pd(s3);
      double* grow = g + j * cols;
      std::size_t k = j;
      for (; k + 4 <= cols; k += 4) {
        __m256d acc = _mm256_loadu_pd(grow + k);
        acc = _mm256_fmadd_pd(a0, _mm256_loadu_pd(r0 + k), acc);
        acc = _mm256_fmadd_pd(a1, _mm256_loadu_pd(r1 + k), acc);
        acc = _mm256_fmadd_pd(a2, _mm256_loadu_pd(r2 + k), acc);
        acc = _mm256_fmadd_pd(a3, _mm256_loadu_pd(r3 + k), acc);
        _mm256_storeu_pd(grow + k, acc);
      }
      for (; k < cols; ++k) {
        double acc = grow[k];
        acc = std::fma(s0, r0[k], acc);
        acc = std::fma(s1, r1[k], acc);
        acc = std::fma(s2, r2[k], acc);
        acc = std::fma(s3, r3[k], acc);
        grow[k] = acc;
      }
    }
  }
  for (; i < rows; ++i) {
    const double* row = x + i * cols;
    for (std::size_t j = 0; j < cols; ++j) axpy_avx2(row[j], row + j, g + j * cols + j, cols - j);
  }
}

constexpr KernelTable kAvx2{
    "avx2", dot_avx2, sum_squares_avx2, axpy_avx2, scale_avx2, gram_upper_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace embq::kernels
