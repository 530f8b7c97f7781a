#pragma once

// Subsampling stability of metrics and rank correlation against accuracy.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embq/matrix.hpp"
#include "embq/metrics.hpp"

namespace embq {

/// `batch` distinct row indices, ascending: select_indices(n, batch,
/// CounterRng(seed)). batch == n returns every row without drawing.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t batch, std::uint64_t seed);

EmbeddingMatrix subsample_rows(const EmbeddingMatrix& m, std::size_t batch, std::uint64_t seed);

enum class BoundVerdict { yes, approximately, no };

const char* to_string(BoundVerdict v);

struct StabilityPoint {
  std::size_t batch = 0;
  /// Mean over successful trials of min(s/f, f/s); absent if every trial failed.
  std::optional<double> mean_factor;
  double lower_bound_rate = 0.0;         // trials with s <= f, over all trials
  double approx_lower_bound_rate = 0.0;  // trials with 0.95 s <= f, over all trials
  std::size_t failures = 0;
  std::vector<std::string> failure_reasons;  // distinct messages, first-seen order
};

struct StabilityProfile {
  std::string metric_name;
  double full_value = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<StabilityPoint> points;
  BoundVerdict verdict = BoundVerdict::no;
};

/// For each batch size, `trials` subsamples (trial t of batch b uses seed
/// derive_seed(derive_seed(seed, b), t)) are scored against the full-matrix
/// value. A trial whose metric is undefined, or whose value has the
/// opposite sign to the full value, is counted as a failure. When both
/// values are 0 the factor is 1.
///
/// Throws DomainError if the metric is undefined on the full matrix and
/// DataError on an invalid batch list.
StabilityProfile stability_profile(const EmbeddingMatrix& m, const std::string& metric,
                                   std::span<const std::size_t> batch_sizes, std::size_t trials,
                                   std::uint64_t seed, const ReportOptions& options = {});

/// Smallest batch size whose mean factor reaches `threshold`.
std::optional<std::size_t> min_batch_for_factor(const StabilityProfile& profile, double threshold);

/// Pearson correlation of average ranks (ties share the mean rank).
double spearman(std::span<const double> x, std::span<const double> y);

/// 1-based ranks with ties averaged.
std::vector<double> fractional_ranks(std::span<const double> values);

struct CorrelationReport {
  std::string metric_name;
  double rho = 0.0;
  std::size_t pairs = 0;
};

CorrelationReport correlate_experiment(const std::string& metric_name,
                                       std::span<const double> metric_values,
                                       std::span<const double> accuracies);

}  // namespace embq
