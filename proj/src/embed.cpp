#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include "embq/datagen.hpp"
#include "embq/error.hpp"

namespace embq {
namespace {

Eigen::MatrixXd normalized_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::VectorXd degree = Eigen::VectorXd::Ones(n);  // self loop from + I
  for (const Edge& e : g.edges()) {
    degree[e.u] += 1.0;
    degree[e.v] += 1.0;
  }
  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = inv_sqrt[i] * inv_sqrt[i];
  for (const Edge& e : g.edges()) {
    const double w = inv_sqrt[e.u] * inv_sqrt[e.v];
    m(e.u, e.v) = w;
    m(e.v, e.u) = w;
  }
  return m;
}

struct TridiagonalEigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // in the tridiagonal basis
};

// Eigenpairs with 1-based indices [lo, hi] of the symmetric tridiagonal
// (diag, sub), via MRRR. Inputs are copied because dstemr overwrites them.
TridiagonalEigenpairs tridiagonal_range(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                        lapack_int lo, lapack_int hi) {
  const auto n = static_cast<lapack_int>(diag.size());
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e.head(n - 1) = sub;
  const lapack_int want = hi - lo + 1;
  TridiagonalEigenpairs out;
  out.values.resize(n);
  out.vectors.resize(n, want);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(want));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const lapack_int info =
      LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, lo, hi, &found,
                     out.values.data(), out.vectors.data(), n, want, support.data(), &tryrac);
  if (info != 0 || found != want) {
    throw DomainError("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  }
  out.values.conservativeResize(want);
  return out;
}

Eigen::VectorXd tridiagonal_values(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub) {
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e = sub;
  const lapack_int info = LAPACKE_dsterf(static_cast<lapack_int>(d.size()), d.data(), e.data());
  if (info != 0) throw DomainError("tridiagonal eigenvalue iteration failed (info " + std::to_string(info) + ")");
  return d;  // ascending
}

}  // namespace

SpectralEmbedding spectral_embed(const Graph& g, std::size_t dim) {
  const std::size_t n = g.node_count();
  if (dim == 0 || dim > n) {
    throw DataError("embedding dimension " + std::to_string(dim) + " must be in [1, " +
                    std::to_string(n) + "]");
  }
  if (n == 1) return {EmbeddingMatrix(1, 1, {1.0}), {1.0}, 1.0};

  const Eigen::MatrixXd m = normalized_adjacency(g);
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(m);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();

  // Singular values are |lambda|. Take the dim largest magnitudes from the
  // two ends of the ascending spectrum, preferring the positive end on ties.
  const Eigen::VectorXd all = tridiagonal_values(diag, sub);
  SpectralEmbedding out{EmbeddingMatrix(1, 1, {0.0}), {}, all.cwiseAbs().sum()};
  std::size_t from_top = 0;
  std::size_t from_bottom = 0;
  while (from_top + from_bottom < dim) {
    const double top = all[static_cast<Eigen::Index>(n - 1 - from_top)];
    const double bottom = all[static_cast<Eigen::Index>(from_bottom)];
    if (std::abs(top) >= std::abs(bottom)) {
      ++from_top;
    } else {
      ++from_bottom;
    }
  }

  struct Column {
    double lambda;
    Eigen::VectorXd vec;
  };
  std::vector<Column> columns;
  columns.reserve(dim);
  auto collect = [&](lapack_int lo, lapack_int hi) {
    const auto pairs = tridiagonal_range(diag, sub, lo, hi);
    const Eigen::MatrixXd vecs = tri.matrixQ() * pairs.vectors;
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) columns.push_back({pairs.values[c], vecs.col(c)});
  };
  const auto ln = static_cast<lapack_int>(n);
  if (from_top > 0) collect(ln - static_cast<lapack_int>(from_top) + 1, ln);
  if (from_bottom > 0) collect(1, static_cast<lapack_int>(from_bottom));
  std::stable_sort(columns.begin(), columns.end(), [](const Column& a, const Column& b) {
    if (std::abs(a.lambda) != std::abs(b.lambda)) return std::abs(a.lambda) > std::abs(b.lambda);
    return a.lambda > b.lambda;
  });

  RowMatrix emb(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    const double sigma = std::abs(columns[c].lambda);
    Eigen::VectorXd v = columns[c].vec;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v[i]) > std::abs(v[pivot])) pivot = i;
    }
    if (v[pivot] < 0.0) v = -v;
    emb.col(static_cast<Eigen::Index>(c)) = std::sqrt(sigma) * v;
    out.kept_sigma.push_back(sigma);
  }
  out.embedding = EmbeddingMatrix::from_rows(emb);
  return out;
}

}  // namespace embq
