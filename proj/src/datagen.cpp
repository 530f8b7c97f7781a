#include "embq/datagen.hpp"

#include <cmath>
#include <string>

#include "embq/error.hpp"
#include "embq/kernels.hpp"
#include "embq/random.hpp"

namespace embq {
namespace {

void require_shape(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) throw DataError("generator needs n >= 1 and d >= 1");
}

// Normalises in place; redraws can't be expressed here, so a zero row
// (probability zero for Gaussian input) is reported.
void normalize_row(double* row, std::size_t d) {
  const double norm = std::sqrt(kernels::sum_squares(row, d));
  if (norm == 0.0) throw DomainError("generated a zero row");
  kernels::scale(1.0 / norm, row, d);
}

}  // namespace

EmbeddingMatrix gen_sphere(std::size_t n, std::size_t d, std::uint64_t seed) {
  require_shape(n, d);
  CounterRng rng(seed);
  std::vector<double> values(n * d);
  for (double& v : values) v = rng.next_gaussian();
  for (std::size_t i = 0; i < n; ++i) normalize_row(values.data() + i * d, d);
  return EmbeddingMatrix(n, d, std::move(values));
}

EmbeddingMatrix gen_collapsed(std::size_t n, std::size_t d, std::size_t live_dims, std::uint64_t seed) {
  require_shape(n, d);
  if (live_dims == 0 || live_dims > d) {
    throw DataError("live_dims must be in [1, d] (got " + std::to_string(live_dims) + ")");
  }
  CounterRng rng(seed);
  std::vector<double> values(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < live_dims; ++j) values[i * d + j] = rng.next_gaussian();
  }
  return EmbeddingMatrix(n, d, std::move(values));
}

EmbeddingMatrix gen_clustered(std::size_t n, std::size_t d, std::size_t k, double spread,
                              std::uint64_t seed) {
  require_shape(n, d);
  if (k == 0 || k > n) throw DataError("cluster count must be in [1, n]");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw DataError("spread must be finite and >= 0");

  CounterRng rng(seed);
  std::vector<double> centroids(k * d);
  for (double& v : centroids) v = rng.next_gaussian();
  for (std::size_t c = 0; c < k; ++c) normalize_row(centroids.data() + c * d, d);

  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(rng.next_below(k));
    double* row = values.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) row[j] = centroids[c * d + j] + spread * rng.next_gaussian();
    normalize_row(row, d);
  }
  return EmbeddingMatrix(n, d, std::move(values));
}

}  // namespace embq
