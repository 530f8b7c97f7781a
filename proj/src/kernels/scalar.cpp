#include "embq/kernels.hpp"

namespace embq::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_squares_scalar(const double* a, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double s, double* x, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) x[i] *= s;
}

void gram_upper_scalar(const double* x, std::size_t rows, std::size_t cols, double* g) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = x + i * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      const double a = row[j];
      double* grow = g + j * cols;
      for (std::size_t k = j; k < cols; ++k) grow[k] += a * row[k];
    }
  }
}

constexpr KernelTable kScalar{
    "scalar", dot_scalar, sum_squares_scalar, axpy_scalar, scale_scalar, gram_upper_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace embq::kernels
