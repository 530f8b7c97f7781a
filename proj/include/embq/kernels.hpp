#pragma once

// Data-parallel inner loops used by the matrix, metric and generator code.
//
// Each instruction set provides one KernelTable. The scalar table is the
// reference; vector tables must agree with it up to reassociation of sums
// (tests/kernels_test.cpp checks this on every table the host can run).
// The active table is chosen once at first use from CPUID, and can be
// pinned with EMBQ_KERNELS=scalar|avx2|neon.

#include <cstddef>
#include <string_view>
#include <vector>

namespace embq::kernels {

struct KernelTable {
  std::string_view name;

  double (*dot)(const double* a, const double* b, std::size_t len);
  double (*sum_squares)(const double* a, std::size_t len);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t len);
  // x *= s
  void (*scale)(double s, double* x, std::size_t len);
  // g[j*cols + k] += sum_i x[i*cols + j] * x[i*cols + k] for j <= k.
  // x is row-major rows x cols, g row-major cols x cols. The strict lower
  // triangle of g is left untouched.
  void (*gram_upper)(const double* x, std::size_t rows, std::size_t cols, double* g);
};

const KernelTable& scalar_table();

/// Tables compiled in and runnable on this CPU, scalar first.
std::vector<const KernelTable*> available_tables();

/// Table used by the library. Selected once; thread-safe.
const KernelTable& active();

// Thin forwarding helpers so call sites read naturally.
inline double dot(const double* a, const double* b, std::size_t len) {
  return active().dot(a, b, len);
}
inline double sum_squares(const double* a, std::size_t len) {
  return active().sum_squares(a, len);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t len) {
  active().axpy(alpha, x, y, len);
}
inline void scale(double s, double* x, std::size_t len) { active().scale(s, x, len); }
inline void gram_upper(const double* x, std::size_t rows, std::size_t cols, double* g) {
  active().gram_upper(x, rows, cols, g);
}

}  // namespace embq::kernels
