#include "embq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embq/error.hpp"
#include "embq/probe.hpp"
#include "embq/random.hpp"

namespace embq {

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t batch, std::uint64_t seed) {
  if (batch == 0 || batch > n) {
    throw DataError("batch size " + std::to_string(batch) + " must be in [1, " +
                    std::to_string(n) + "]");
  }
  if (batch == n) {
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  CounterRng rng(seed);
  return select_indices(n, batch, rng);
}

EmbeddingMatrix subsample_rows(const EmbeddingMatrix& m, std::size_t batch, std::uint64_t seed) {
  const auto idx = subsample_indices(m.n(), batch, seed);
  return select_rows(m, idx);
}

const char* to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::yes: return "yes";
    case BoundVerdict::approximately: return "0.95-approximately";
    case BoundVerdict::no: return "no";
  }
  return "no";
}

StabilityProfile stability_profile(const EmbeddingMatrix& m, const std::string& metric,
                                   std::span<const std::size_t> batch_sizes, std::size_t trials,
                                   std::uint64_t seed, const ReportOptions& options) {
  if (trials == 0) throw DataError("stability profile needs at least one trial");
  if (batch_sizes.empty()) throw DataError("stability profile needs at least one batch size");
  for (std::size_t i = 0; i < batch_sizes.size(); ++i) {
    if (batch_sizes[i] == 0 || batch_sizes[i] > m.n()) {
      throw DataError("batch size " + std::to_string(batch_sizes[i]) + " must be in [1, " +
                      std::to_string(m.n()) + "]");
    }
    if (i > 0 && batch_sizes[i] <= batch_sizes[i - 1]) {
      throw DataError("batch sizes must be strictly increasing");
    }
  }

  StabilityProfile profile;
  profile.metric_name = metric;
  profile.n = m.n();
  profile.trials = trials;
  profile.seed = seed;
  profile.full_value = evaluate_metric(metric, m, options);
  const double full = profile.full_value;

  std::size_t bounded = 0;
  std::size_t approx_bounded = 0;
  for (std::size_t batch : batch_sizes) {
    StabilityPoint point;
    point.batch = batch;
    const std::uint64_t batch_seed = derive_seed(seed, batch);
    double factor_sum = 0.0;
    std::size_t ok = 0;
    std::size_t below = 0;
    std::size_t approx_below = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      auto fail = [&](const std::string& reason) {
        ++point.failures;
        if (std::find(point.failure_reasons.begin(), point.failure_reasons.end(), reason) ==
            point.failure_reasons.end()) {
          point.failure_reasons.push_back(reason);
        }
      };
      double sampled = 0.0;
      try {
        sampled = evaluate_metric(metric, subsample_rows(m, batch, derive_seed(batch_seed, t)), options);
      } catch (const DomainError& e) {
        fail(e.what());
        continue;
      }
      double factor = 1.0;
      if (sampled != 0.0 || full != 0.0) {
        if (sampled == 0.0 || full == 0.0 || (sampled < 0.0) != (full < 0.0)) {
          fail("sampled and full values differ in sign");
          continue;
        }
        factor = std::min(sampled / full, full / sampled);
      }
      factor_sum += factor;
      ++ok;
      if (sampled <= full) ++below;
      if (0.95 * sampled <= full) ++approx_below;
    }
    if (ok > 0) point.mean_factor = factor_sum / static_cast<double>(ok);
    point.lower_bound_rate = static_cast<double>(below) / static_cast<double>(trials);
    point.approx_lower_bound_rate = static_cast<double>(approx_below) / static_cast<double>(trials);
    bounded += below;
    approx_bounded += approx_below;
    profile.points.push_back(std::move(point));
  }

  const double total = static_cast<double>(trials * batch_sizes.size());
  if (static_cast<double>(bounded) / total >= 0.99) {
    profile.verdict = BoundVerdict::yes;
  } else if (static_cast<double>(approx_bounded) / total >= 0.99) {
    profile.verdict = BoundVerdict::approximately;
  } else {
    profile.verdict = BoundVerdict::no;
  }
  return profile;
}

std::optional<std::size_t> min_batch_for_factor(const StabilityProfile& profile, double threshold) {
  for (const auto& p : profile.points) {
    if (p.mean_factor && *p.mean_factor >= threshold) return p.batch;
  }
  return std::nullopt;
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean of 1-based ranks i+1..j+1
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("spearman inputs differ in length (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw DataError("spearman needs at least 2 pairs");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw DataError("spearman input has a non-finite value at index " + std::to_string(i));
    }
  }
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DomainError("spearman correlation is undefined when one input is constant");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport correlate_experiment(const std::string& metric_name,
                                       std::span<const double> metric_values,
                                       std::span<const double> accuracies) {
  return {metric_name, spearman(metric_values, accuracies), metric_values.size()};
}

}  // namespace embq
