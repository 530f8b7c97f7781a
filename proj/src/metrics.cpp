#include "embq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embq/kernels.hpp"

namespace embq {
namespace {

void require_nonzero(const Spectrum& s, const char* what) {
  if (s.sigma.empty() || !(s.sigma.front() > 0.0)) {
    throw DomainError(std::string(what) + " is undefined for the zero matrix");
  }
}

}  // namespace

double alpha_req(const Spectrum& s) {
  if (s.rank < 2) {
    throw DomainError("power-law slope needs at least 2 singular values above tolerance (rank " +
                      std::to_string(s.rank) + ")");
  }
  const std::size_t k = s.rank;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mean_x += std::log(static_cast<double>(i + 1));
    mean_y += std::log(s.sigma[i]);
  }
  mean_x /= static_cast<double>(k);
  mean_y /= static_cast<double>(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(static_cast<double>(i + 1)) - mean_x;
    sxy += dx * (std::log(s.sigma[i]) - mean_y);
    sxx += dx * dx;
  }
  return 0.0 - sxy / sxx;  // no negative zero for a flat spectrum
}

double rankme(const Spectrum& s) {
  require_nonzero(s, "rankme");
  // Values at or below tol are roundoff and count as exact zeros.
  const auto kept = s.sigma.begin() + static_cast<std::ptrdiff_t>(s.rank);
  const double total = std::accumulate(s.sigma.begin(), kept, 0.0);
  double entropy = 0.0;
  for (auto it = s.sigma.begin(); it != kept; ++it) {
    const double p = *it / total;
    entropy -= p * std::log(p);
  }
  return std::max(0.0, entropy);
}

double rankme_star(const Spectrum& s) {
  const std::size_t k = std::min(s.n, s.d);
  if (k < 2) throw DomainError("rankme_star needs min(n, d) >= 2 (normalizer ln 1 = 0)");
  return rankme(s) / std::log(static_cast<double>(k));
}

double nesum(const CovarianceSpectrum& cs) {
  if (cs.lambda.empty() || cs.lambda.front() == 0.0) return 0.0;
  const double top = cs.lambda.front();
  double total = 0.0;
  for (double v : cs.lambda) total += v / top;
  return total;
}

double stable_rank(const Spectrum& s) {
  require_nonzero(s, "stable_rank");
  const double top = s.sigma.front();
  double total = 0.0;
  for (double v : s.sigma) total += (v / top) * (v / top);
  return total;
}

ConditionNumber cond_number(const Spectrum& s) {
  require_nonzero(s, "cond_number");
  return {s.sigma.front() / s.sigma[s.rank - 1], s.rank < s.sigma.size()};
}

Coherence coherence(const Spectrum& s) {
  if (!s.has_vectors()) throw DomainError("coherence needs a spectrum computed with vectors");
  if (s.rank == 0) throw DomainError("coherence is undefined for rank 0");
  const double r = static_cast<double>(s.rank);
  const double max_left = *std::max_element(s.left_row_norms.begin(), s.left_row_norms.end());
  const double max_right = *std::max_element(s.right_row_norms.begin(), s.right_row_norms.end());
  // mu_0 >= 1 exactly (row norms sum to r); clamp roundoff below it.
  Coherence c;
  c.left = std::max(1.0, static_cast<double>(s.n) / r * max_left);
  c.right = std::max(1.0, static_cast<double>(s.d) / r * max_right);
  c.combined = std::max(c.left, c.right);
  return c;
}

double self_cluster(const EmbeddingMatrix& w) {
  const std::size_t n = w.n();
  const std::size_t d = w.d();
  if (n < 2 || d < 2) {
    throw DomainError("self_cluster needs n >= 2 and d >= 2 (got " + std::to_string(n) + " x " +
                      std::to_string(d) + ")");
  }
  if (!rows_unit_norm(w)) throw DomainError("self_cluster needs unit-norm rows (normalize first)");

  const Eigen::MatrixXd g = gram_dxd(w);
  const double q = g.squaredNorm();
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  return (dd * q - nn * (dd + nn - 1.0)) / ((dd - 1.0) * (nn - 1.0) * nn);
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{
      "alpha_req",   "rankme",         "rankme_star",     "nesum",     "stable_rank",
      "cond_number", "coherence_left", "coherence_right", "coherence", "self_cluster",
  };
  return names;
}

std::vector<std::pair<std::string, double>> MetricReport::named_values() const {
  std::vector<std::pair<std::string, double>> out;
  auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) out.emplace_back(name, *v);
  };
  put("alpha_req", alpha_req);
  put("rankme", rankme);
  put("rankme_star", rankme_star);
  put("nesum", nesum);
  put("stable_rank", stable_rank);
  if (cond_number) out.emplace_back("cond_number", cond_number->value);
  if (coherence) {
    out.emplace_back("coherence_left", coherence->left);
    out.emplace_back("coherence_right", coherence->right);
    out.emplace_back("coherence", coherence->combined);
  }
  put("self_cluster", self_cluster);
  return out;
}

MetricReport full_report(const EmbeddingMatrix& input, const ReportOptions& options) {
  std::vector<UndefinedMetric> failures;
  auto attempt = [&](const char* name, auto&& fn) -> decltype(std::optional{fn()}) {
    try {
      return fn();
    } catch (const DomainError& e) {
      failures.push_back({name, e.what()});
      return std::nullopt;
    }
  };

  std::optional<EmbeddingMatrix> normalized;
  if (options.normalize_rows) {
    try {
      normalized = normalize_rows(input);
    } catch (const DomainError& e) {
      if (!options.allow_partial) throw MetricsError(std::vector<UndefinedMetric>{{"self_cluster", e.what()}});
      failures.push_back({"self_cluster", e.what()});
    }
  }
  const EmbeddingMatrix& m = normalized ? *normalized : input;

  const Spectrum s = compute_spectrum(m);
  MetricReport r;
  r.n = m.n();
  r.d = m.d();
  r.rank = s.rank;
  r.alpha_req = attempt("alpha_req", [&] { return alpha_req(s); });
  r.rankme = attempt("rankme", [&] { return rankme(s); });
  r.rankme_star = attempt("rankme_star", [&] { return rankme_star(s); });
  r.nesum = attempt("nesum", [&] { return nesum(compute_covariance_spectrum(m, options.center)); });
  r.stable_rank = attempt("stable_rank", [&] { return stable_rank(s); });
  r.cond_number = attempt("cond_number", [&] { return cond_number(s); });
  r.coherence = attempt("coherence", [&] { return coherence(s); });
  if (normalized || (!options.normalize_rows && rows_unit_norm(m))) {
    r.self_cluster = attempt("self_cluster", [&] { return self_cluster(m); });
  }

  if (!failures.empty() && !options.allow_partial) throw MetricsError(std::move(failures));
  r.undefined = std::move(failures);
  return r;
}

double evaluate_metric(std::string_view name, const EmbeddingMatrix& input,
                       const ReportOptions& options) {
  const auto& names = metric_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw UsageError("unknown metric '" + std::string(name) + "'");
  }
  std::optional<EmbeddingMatrix> normalized;
  if (options.normalize_rows) normalized = normalize_rows(input);
  const EmbeddingMatrix& m = normalized ? *normalized : input;

  if (name == "nesum") return nesum(compute_covariance_spectrum(m, options.center));
  if (name == "self_cluster") return self_cluster(m);
  if (name.starts_with("coherence")) {
    const Coherence c = coherence(compute_spectrum(m, {.vectors = true}));
    if (name == "coherence_left") return c.left;
    if (name == "coherence_right") return c.right;
    return c.combined;
  }
  const Spectrum s = compute_spectrum(m, {.vectors = false});
  if (name == "alpha_req") return alpha_req(s);
  if (name == "rankme") return rankme(s);
  if (name == "rankme_star") return rankme_star(s);
  if (name == "stable_rank") return stable_rank(s);
  return cond_number(s).value;
}

}  // namespace embq
