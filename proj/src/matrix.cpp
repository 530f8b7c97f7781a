#include "embq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "embq/error.hpp"
#include "embq/kernels.hpp"

namespace embq {
namespace {

// Jacobi (after QR preconditioning) keeps small singular values to high
// relative accuracy and is fast while the short side stays small.
constexpr Eigen::Index kJacobiMaxSide = 256;

struct Decomposition {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd u;  // n x min(n, d) when vectors requested
  Eigen::MatrixXd v;  // d x min(n, d)
};

Decomposition decompose(const EmbeddingMatrix& m, bool vectors) {
  const Eigen::MatrixXd a = m.view();
  const unsigned flags = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Decomposition out;
  if (std::min(a.rows(), a.cols()) <= kJacobiMaxSide) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, flags);
    out.sigma = svd.singularValues();
    if (vectors) {
      out.u = svd.matrixU();
      out.v = svd.matrixV();
    }
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, flags);
    out.sigma = svd.singularValues();
    if (vectors) {
      out.u = svd.matrixU();
      out.v = svd.matrixV();
    }
  }
  out.sigma = out.sigma.cwiseMax(0.0);
  return out;
}

std::size_t count_above(const Eigen::VectorXd& sigma, double tol) {
  std::size_t r = 0;
  while (r < static_cast<std::size_t>(sigma.size()) && sigma[static_cast<Eigen::Index>(r)] > tol) ++r;
  return r;
}

std::vector<double> row_norms(const Eigen::MatrixXd& block, std::size_t rank) {
  std::vector<double> out(static_cast<std::size_t>(block.rows()), 0.0);
  const auto r = static_cast<Eigen::Index>(rank);
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = block.row(i).head(r).squaredNorm();
  }
  return out;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n_ == 0 || d_ == 0) {
    throw DataError("embedding matrix must have n >= 1 and d >= 1 (got " + std::to_string(n_) +
                    " x " + std::to_string(d_) + ")");
  }
  if (values_.size() != n_ * d_) {
    throw DataError("embedding matrix shape " + std::to_string(n_) + " x " + std::to_string(d_) +
                    " does not match " + std::to_string(values_.size()) + " values");
  }
  const auto bad = std::find_if(values_.begin(), values_.end(),
                                [](double v) { return !std::isfinite(v); });
  if (bad != values_.end()) {
    const auto idx = static_cast<std::size_t>(bad - values_.begin());
    throw DataError("non-finite value " + std::to_string(*bad) + " at (row " +
                    std::to_string(idx / d_) + ", col " + std::to_string(idx % d_) + ")");
  }
}

EmbeddingMatrix EmbeddingMatrix::from_float32(std::span<const float> values, std::size_t n,
                                              std::size_t d) {
  return EmbeddingMatrix(n, d, std::vector<double>(values.begin(), values.end()));
}

EmbeddingMatrix EmbeddingMatrix::from_rows(const RowMatrix& rows) {
  return EmbeddingMatrix(static_cast<std::size_t>(rows.rows()), static_cast<std::size_t>(rows.cols()),
                         std::vector<double>(rows.data(), rows.data() + rows.size()));
}

double rank_tolerance(std::size_t n, std::size_t d, double sigma_max) {
  constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2.0;
  return static_cast<double>(std::max(n, d)) * sigma_max * unit_roundoff;
}

Spectrum Spectrum::from_singular_values(std::vector<double> sigma, std::size_t n, std::size_t d) {
  if (sigma.size() != std::min(n, d)) {
    throw DomainError("expected min(n, d) = " + std::to_string(std::min(n, d)) +
                      " singular values, got " + std::to_string(sigma.size()));
  }
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] >= 0.0) || !std::isfinite(sigma[i]) || (i > 0 && sigma[i] > sigma[i - 1])) {
      throw DomainError("singular values must be finite, non-negative and non-increasing (index " +
                        std::to_string(i) + ")");
    }
  }
  Spectrum s;
  s.n = n;
  s.d = d;
  s.sigma = std::move(sigma);
  const double top = s.sigma.empty() ? 0.0 : s.sigma.front();
  s.tol = top > 0.0 ? rank_tolerance(n, d, top) : 0.0;
  s.rank = static_cast<std::size_t>(
      std::count_if(s.sigma.begin(), s.sigma.end(), [&](double v) { return v > s.tol; }));
  return s;
}

Spectrum compute_spectrum(const EmbeddingMatrix& m, SpectrumOptions options) {
  const Decomposition dec = decompose(m, options.vectors);
  Spectrum s;
  s.n = m.n();
  s.d = m.d();
  s.sigma.assign(dec.sigma.data(), dec.sigma.data() + dec.sigma.size());
  const double top = s.sigma.front();
  s.tol = top > 0.0 ? rank_tolerance(m.n(), m.d(), top) : 0.0;
  s.rank = count_above(dec.sigma, s.tol);
  if (options.vectors) {
    s.left_row_norms = row_norms(dec.u, s.rank);
    s.right_row_norms = row_norms(dec.v, s.rank);
  }
  return s;
}

ThinSvd truncated_svd(const EmbeddingMatrix& m) {
  const Decomposition dec = decompose(m, true);
  ThinSvd out;
  const double top = dec.sigma[0];
  out.tol = top > 0.0 ? rank_tolerance(m.n(), m.d(), top) : 0.0;
  const auto r = static_cast<Eigen::Index>(count_above(dec.sigma, out.tol));
  out.sigma = dec.sigma.head(r);
  out.u = dec.u.leftCols(r);
  out.v = dec.v.leftCols(r);
  return out;
}

Eigen::MatrixXd gram_dxd(const EmbeddingMatrix& m) {
  const std::size_t d = m.d();
  RowMatrix g = RowMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  kernels::gram_upper(m.values().data(), m.n(), d, g.data());
  g.triangularView<Eigen::StrictlyLower>() = g.transpose();
  return g;
}

CovarianceSpectrum compute_covariance_spectrum(const EmbeddingMatrix& m, bool center) {
  const std::size_t n = m.n();
  const std::size_t d = m.d();
  RowMatrix g = RowMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  if (center) {
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) kernels::axpy(1.0, m.row(i).data(), mean.data(), d);
    kernels::scale(1.0 / static_cast<double>(n), mean.data(), d);
    std::vector<double> centered(m.values().begin(), m.values().end());
    for (std::size_t i = 0; i < n; ++i) kernels::axpy(-1.0, mean.data(), centered.data() + i * d, d);
    kernels::gram_upper(centered.data(), n, d, g.data());
  } else {
    kernels::gram_upper(m.values().data(), n, d, g.data());
  }
  g /= static_cast<double>(n);
  g.triangularView<Eigen::StrictlyLower>() = g.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(g), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ascending = eig.eigenvalues();
  CovarianceSpectrum out;
  out.lambda.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.lambda[i] = std::max(0.0, ascending[static_cast<Eigen::Index>(d - 1 - i)]);
  }
  return out;
}

EmbeddingMatrix normalize_rows(const EmbeddingMatrix& m) {
  const std::size_t d = m.d();
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t i = 0; i < m.n(); ++i) {
    double* row = out.data() + i * d;
    const double norm = std::sqrt(kernels::sum_squares(row, d));
    if (norm == 0.0) {
      throw DomainError("row " + std::to_string(i) + " has zero norm and cannot be normalized");
    }
    if (std::abs(norm - 1.0) > 1e-12) kernels::scale(1.0 / norm, row, d);
  }
  return EmbeddingMatrix(m.n(), d, std::move(out));
}

bool rows_unit_norm(const EmbeddingMatrix& m, double tolerance) {
  for (std::size_t i = 0; i < m.n(); ++i) {
    const double norm = std::sqrt(kernels::sum_squares(m.row(i).data(), m.d()));
    if (!(std::abs(norm - 1.0) <= tolerance)) return false;
  }
  return true;
}

}  // namespace embq
