// AArch64 Advanced SIMD variants. NEON is architecturally mandatory on
// AArch64, so this table is always runnable when compiled in.

#include <arm_neon.h>

#include <cmath>

#include "tables.hpp"

namespace embq::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t len) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc2 = vfmaq_f64(acc2, vld1q_f64(a + i + 4), vld1q_f64(b + i + 4));
    acc3 = vfmaq_f64(acc3, vld1q_f64(a + i + 6), vld1q_f64(b + i + 6));
  }
  for (; i + 2 <= len; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc = vaddvq_f64(vaddq_f64(vaddq_f64(acc0, acc1), vaddq_f64(acc2, acc3)));
  for (; i < len; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

double sum_squares_neon(const double* a, std::size_t len) { return dot_neon(a, a, len); }

void axpy_neon(double alpha, const double* x, double* y, std::size_t len) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < len; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void scale_neon(double s, double* x, std::size_t len) {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) vst1q_f64(x + i, vmulq_n_f64(vld1q_f64(x + i), s));
  for (; i < len; ++i) x[i] *= s;
}

void gram_upper_neon(const double* x, std::size_t rows, std::size_t cols, double* g) {
  std::size_t i = 0;
  for (; i + 4 <= rows; i += 4) {
    const double* r0 = x + i * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    for (std::size_t j = 0; j < cols; ++j) {
      const double s0 = r0[j], s1 = r1[j], s2 = r2[j], s3 = r3[j];
      double* grow = g + j * cols;
      std::size_t k = j;
      for (; k + 2 <= cols; k += 2) {
        float64x2_t acc = vld1q_f64(grow + k);
        acc = vfmaq_n_f64(acc, vld1q_f64(r0 + k), s0);
        acc = vfmaq_n_f64(acc, vld1q_f64(r1 + k), s1);
        acc = vfmaq_n_f64(acc, vld1q_f64(r2 + k), s2);
        acc = vfmaq_n_f64(acc, vld1q_f64(r3 + k), s3);
        vst1q_f64(grow + k, acc);
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
    for (std::size_t j = 0; j < cols; ++j) axpy_neon(row[j], row + j, g + j * cols + j, cols - j);
  }
}

constexpr KernelTable kNeon{
    "neon", dot_neon, sum_squares_neon, axpy_neon, scale_neon, gram_upper_neon,
};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace embq::kernels
