#pragma once

// Embedding matrices and the spectral decompositions every metric reads.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace embq {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense n x d matrix of finite doubles, rows are samples. Immutable once
/// built; construction rejects empty shapes and non-finite entries.
class EmbeddingMatrix {
 public:
  /// Throws DataError naming the first non-finite (row, col), or on a shape
  /// mismatch between n*d and values.size().
  EmbeddingMatrix(std::size_t n, std::size_t d, std::vector<double> values);

  static EmbeddingMatrix from_float32(std::span<const float> values, std::size_t n, std::size_t d);
  static EmbeddingMatrix from_rows(const RowMatrix& rows);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  std::span<const double> values() const { return values_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * d_ + j]; }

  Eigen::Map<const RowMatrix> view() const {
    return {values_.data(), static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(d_)};
  }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
};

/// Singular values plus the row leverage of the rank-r singular blocks.
struct Spectrum {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> sigma;            // descending, length min(n, d)
  std::vector<double> left_row_norms;   // ||U_r^T e_i||^2, length n; empty if not computed
  std::vector<double> right_row_norms;  // ||V_r^T e_j||^2, length d; empty if not computed
  std::size_t rank = 0;                 // |{i : sigma[i] > tol}|
  double tol = 0.0;

  bool has_vectors() const { return !left_row_norms.empty(); }

  /// Spectrum of an n x d matrix known only through its singular values.
  /// Sorts nothing: throws DomainError unless sigma is non-increasing and
  /// non-negative.
  static Spectrum from_singular_values(std::vector<double> sigma, std::size_t n, std::size_t d);
  static Spectrum from_singular_values(std::vector<double> sigma) {
    const std::size_t k = sigma.size();
    return from_singular_values(std::move(sigma), k, k);
  }
};

struct SpectrumOptions {
  bool vectors = true;  // compute left/right row norms (needed by coherence)
};

/// tol = max(n, d) * sigma_max * u, with u = 2^-53 the unit roundoff.
double rank_tolerance(std::size_t n, std::size_t d, double sigma_max);

Spectrum compute_spectrum(const EmbeddingMatrix& m, SpectrumOptions options = {});

/// Rank-truncated thin SVD: u is n x rank, v is d x rank, sigma has the
/// `rank` singular values above tol.
struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
  double tol = 0.0;
};

ThinSvd truncated_svd(const EmbeddingMatrix& m);

struct CovarianceSpectrum {
  std::vector<double> lambda;  // descending, clamped at 0, length d
};

/// Eigenvalues of (1/n) Xc^T Xc, Xc = m with column means removed when
/// `center` is set. Works on the d x d Gram product only.
CovarianceSpectrum compute_covariance_spectrum(const EmbeddingMatrix& m, bool center = true);

/// Scales every row to unit Euclidean norm. Rows already within 1e-12 of
/// unit norm are copied unchanged. Throws DomainError on a zero row.
EmbeddingMatrix normalize_rows(const EmbeddingMatrix& m);

bool rows_unit_norm(const EmbeddingMatrix& m, double tolerance = 1e-6);

/// X^T X as a symmetric d x d matrix.
Eigen::MatrixXd gram_dxd(const EmbeddingMatrix& m);

}  // namespace embq
