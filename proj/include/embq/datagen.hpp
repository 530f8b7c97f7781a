#pragma once

// Synthetic embedding matrices and the spectral graph embedder.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "embq/graph.hpp"
#include "embq/matrix.hpp"

namespace embq {

/// Rows uniform on the unit sphere in R^d (normalised Gaussian rows).
EmbeddingMatrix gen_sphere(std::size_t n, std::size_t d, std::uint64_t seed);

/// Standard Gaussian in the first live_dims columns, exact zeros elsewhere.
EmbeddingMatrix gen_collapsed(std::size_t n, std::size_t d, std::size_t live_dims, std::uint64_t seed);

/// k unit-norm random centroids; each row picks one uniformly, adds
/// N(0, spread^2 I) noise and is renormalised.
EmbeddingMatrix gen_clustered(std::size_t n, std::size_t d, std::size_t k, double spread,
                              std::uint64_t seed);

struct SpectralEmbedding {
  EmbeddingMatrix embedding;        // n x dim
  std::vector<double> kept_sigma;   // the dim singular values used, descending
  double total_sigma = 0.0;         // sum of all n singular values
};

/// Top-dim singular pairs of D^{-1/2} (A + I) D^{-1/2}, D the degree matrix
/// of A + I. Row i of the embedding is u_i scaled by sqrt(sigma); each
/// column's sign is fixed so its largest-magnitude entry (first on ties) is
/// positive. Throws DataError if dim is 0 or exceeds n.
SpectralEmbedding spectral_embed(const Graph& g, std::size_t dim);

}  // namespace embq
