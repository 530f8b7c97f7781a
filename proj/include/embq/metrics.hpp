#pragma once

// Label-free embedding quality metrics.
//
// Every spectral metric reads a Spectrum (or CovarianceSpectrum) so the
// expensive decomposition is done once per matrix. Each function throws
// DomainError when its quantity is undefined for the input.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "embq/error.hpp"
#include "embq/matrix.hpp"

namespace embq {

/// Negated OLS slope of ln(sigma_i) against ln(i), i = 1..rank.
/// Requires rank >= 2.
double alpha_req(const Spectrum& s);

/// Shannon entropy (nats) of p_i = sigma_i / sum(sigma), with 0 ln 0 = 0.
/// Singular values at or below tol count as 0.
double rankme(const Spectrum& s);

/// rankme / ln(min(n, d)), in [0, 1]. Requires min(n, d) >= 2.
double rankme_star(const Spectrum& s);

/// sum_i lambda_i / lambda_max; 0 for the all-zero spectrum.
double nesum(const CovarianceSpectrum& cs);

/// sum sigma_i^2 / sigma_1^2.
double stable_rank(const Spectrum& s);

struct ConditionNumber {
  double value = 0.0;
  /// True when rank < min(n, d): value is sigma_1 over the smallest
  /// singular value above tol rather than over sigma_min.
  bool truncated = false;
};

ConditionNumber cond_number(const Spectrum& s);

struct Coherence {
  double left = 0.0;      // (n / r) max_i ||U_r^T e_i||^2
  double right = 0.0;     // (d / r) max_j ||V_r^T e_j||^2
  double combined = 0.0;  // max(left, right): smallest mu_0 meeting both bounds
};

/// Requires a spectrum computed with vectors and rank >= 1.
Coherence coherence(const Spectrum& s);

/// Clustering statistic of unit-norm rows:
///   (d Q - n (d + n - 1)) / ((d - 1)(n - 1) n),   Q = ||W W^T||_F^2,
/// evaluated as ||W^T W||_F^2 in O(n d^2). 1 when all rows coincide, about
/// 0 for rows uniform on the sphere.
double self_cluster(const EmbeddingMatrix& w);

struct ReportOptions {
  bool center = true;           // centre columns before the NESum covariance
  bool normalize_rows = false;  // L2-normalise rows first; enables self_cluster
  bool allow_partial = false;   // return undefined metrics in `undefined` instead of throwing
};

struct MetricReport {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t rank = 0;

  std::optional<double> alpha_req;
  std::optional<double> rankme;
  std::optional<double> rankme_star;
  std::optional<double> nesum;
  std::optional<double> stable_rank;
  std::optional<ConditionNumber> cond_number;
  std::optional<Coherence> coherence;
  std::optional<double> self_cluster;  // absent unless rows are (or were made) unit norm

  std::vector<UndefinedMetric> undefined;

  /// Defined metrics as (name, value), in metric_names() order.
  std::vector<std::pair<std::string, double>> named_values() const;
};

/// Canonical metric names, in report order.
const std::vector<std::string>& metric_names();

/// Computes the spectrum once and derives every metric from it. Unless
/// options.allow_partial is set, throws MetricsError listing every metric
/// that is undefined for this input.
MetricReport full_report(const EmbeddingMatrix& m, const ReportOptions& options = {});

/// One metric by name, computing only what it needs. Throws UsageError for
/// an unknown name and DomainError when the metric is undefined.
double evaluate_metric(std::string_view name, const EmbeddingMatrix& m,
                       const ReportOptions& options = {});

}  // namespace embq
