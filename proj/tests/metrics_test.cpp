#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "embq/datagen.hpp"
#include "embq/error.hpp"
#include "embq/metrics.hpp"
#include "support/helpers.hpp"
#include "support/oracle.hpp"

namespace {

using embq::EmbeddingMatrix;
using embq::Spectrum;
using testing_support::rel_err;
using testing_support::to_embedding;

Spectrum sv(std::vector<double> sigma) { return Spectrum::from_singular_values(std::move(sigma)); }

std::vector<double> power_law(std::size_t count, double scale, double alpha) {
  std::vector<double> s;
  for (std::size_t i = 1; i <= count; ++i) s.push_back(scale * std::pow(static_cast<double>(i), -alpha));
  return s;
}

TEST(AlphaReq, ExactPowerLaws) {
  EXPECT_NEAR(embq::alpha_req(sv(power_law(100, 1.0, 1.0))), 1.0, 1e-9);
  EXPECT_NEAR(embq::alpha_req(sv(power_law(50, 7.0, 0.5))), 0.5, 1e-9);
}

TEST(AlphaReq, FourPointsMatchOlsFormula) {
  const std::vector<double> s{4, 2, 1, 0.5};
  EXPECT_NEAR(embq::alpha_req(sv(s)), oracle::alpha_req(s, 4), 1e-12);
}

TEST(AlphaReq, UsesOnlyAboveToleranceValues) {
  auto s = power_law(10, 1.0, 2.0);
  s.push_back(0.0);
  s.push_back(0.0);
  EXPECT_NEAR(embq::alpha_req(Spectrum::from_singular_values(s, 12, 12)), 2.0, 1e-9);
}

TEST(AlphaReq, RankBelowTwoIsDomainError) {
  EXPECT_THROW(embq::alpha_req(sv({3.0, 0.0})), embq::DomainError);
}

TEST(RankMe, Examples) {
  EXPECT_NEAR(embq::rankme(sv({1, 1, 1, 1})), std::log(4.0), 1e-15);
  EXPECT_EQ(embq::rankme(sv({5, 0, 0})), 0.0);
  EXPECT_NEAR(embq::rankme(sv({2, 1, 1})), 1.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(embq::rankme(sv({2, 1, 1})), 1.039721, 1e-6);
  EXPECT_THROW(embq::rankme(sv({0, 0})), embq::DomainError);
}

TEST(RankMeStar, Examples) {
  EXPECT_NEAR(embq::rankme_star(sv({1, 1, 1, 1})), 1.0, 1e-15);
  EXPECT_EQ(embq::rankme_star(sv({5, 0, 0, 0})), 0.0);
  EXPECT_NEAR(embq::rankme_star(sv({2, 1, 1})), 0.946395, 1e-6);
  EXPECT_THROW(embq::rankme_star(Spectrum::from_singular_values({2.0}, 5, 1)), embq::DomainError);
}

TEST(NESum, Examples) {
  EXPECT_EQ(embq::nesum({{2, 2, 2}}), 3.0);
  EXPECT_EQ(embq::nesum({{0, 0}}), 0.0);
  EXPECT_EQ(embq::nesum({{3, 1.5, 0}}), 1.5);
}

TEST(StableRank, Examples) {
  EXPECT_EQ(embq::stable_rank(sv({1, 1})), 2.0);
  EXPECT_EQ(embq::stable_rank(sv({1, 0, 0})), 1.0);
  EXPECT_EQ(embq::stable_rank(sv({2, 1, 1})), 1.5);
  EXPECT_THROW(embq::stable_rank(sv({0, 0})), embq::DomainError);
}

TEST(CondNumber, ExamplesAndTruncationFlag) {
  EXPECT_EQ(embq::cond_number(sv({5, 5, 5})).value, 1.0);
  const auto c = embq::cond_number(sv({8, 4, 2}));
  EXPECT_EQ(c.value, 4.0);
  EXPECT_FALSE(c.truncated);
  const auto t = embq::cond_number(sv({8, 4, 0}));
  EXPECT_EQ(t.value, 2.0);
  EXPECT_TRUE(t.truncated);
  EXPECT_THROW(embq::cond_number(sv({0, 0})), embq::DomainError);
}

TEST(CondNumber, GaussianMatchesOracle) {
  const Eigen::MatrixXd x = oracle::gaussian(64, 16, 21);
  const auto o = oracle::jacobi_svd(x);
  const auto c = embq::cond_number(embq::compute_spectrum(to_embedding(x)));
  EXPECT_LT(rel_err(c.value, o.sigma[0] / o.sigma[15]), 1e-9);
}

TEST(Coherence, IdentityIsOne) {
  const auto c = embq::coherence(embq::compute_spectrum(to_embedding(Eigen::MatrixXd::Identity(5, 5))));
  EXPECT_NEAR(c.left, 1.0, 1e-12);
  EXPECT_NEAR(c.right, 1.0, 1e-12);
  EXPECT_NEAR(c.combined, 1.0, 1e-12);
}

TEST(Coherence, RankOneSpikeAndFlatVector) {
  Eigen::MatrixXd spike = Eigen::MatrixXd::Zero(4, 3);
  spike.row(0) << 1.0, 2.0, 2.0;
  EXPECT_NEAR(embq::coherence(embq::compute_spectrum(to_embedding(spike))).left, 4.0, 1e-12);

  Eigen::MatrixXd flat(4, 3);
  for (int i = 0; i < 4; ++i) flat.row(i) << 1.0, 2.0, 2.0;
  EXPECT_NEAR(embq::coherence(embq::compute_spectrum(to_embedding(flat))).left, 1.0, 1e-12);
}

TEST(Coherence, NeedsVectorsAndRank) {
  EXPECT_THROW(embq::coherence(sv({1, 1})), embq::DomainError);
  EXPECT_THROW(embq::coherence(embq::compute_spectrum(EmbeddingMatrix(2, 2, {0, 0, 0, 0}))), embq::DomainError);
}

TEST(SelfCluster, CollapsedRowsGiveOne) {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.insert(v.end(), {0.6, 0.8, 0.0});
  EXPECT_NEAR(embq::self_cluster(EmbeddingMatrix(10, 3, v)), 1.0, 1e-12);
}

TEST(SelfCluster, OrthonormalRows) {
  const Eigen::MatrixXd q = oracle::random_orthogonal(8, 31).topRows(4);
  EXPECT_NEAR(embq::self_cluster(to_embedding(q)), -1.0 / 7.0, 1e-12);
}

TEST(SelfCluster, MatchesPairwiseDefinition) {
  for (std::size_t n : {2u, 17u, 128u}) {
    const auto w = embq::gen_sphere(n, 9, n);
    const double want = oracle::self_cluster(testing_support::to_dense(w));
    EXPECT_LT(std::abs(embq::self_cluster(w) - want), 1e-10 * std::max(1.0, std::abs(want))) << n;
  }
}

TEST(SelfCluster, Preconditions) {
  EXPECT_THROW(embq::self_cluster(EmbeddingMatrix(1, 3, {1, 0, 0})), embq::DomainError);
  EXPECT_THROW(embq::self_cluster(EmbeddingMatrix(2, 1, {1, 1})), embq::DomainError);
  EXPECT_THROW(embq::self_cluster(EmbeddingMatrix(2, 2, {1, 1, 0, 1})), embq::DomainError);
}

TEST(FullReport, IdentityComposite) {
  const auto r = embq::full_report(to_embedding(Eigen::MatrixXd::Identity(4, 4)));
  EXPECT_NEAR(*r.rankme, std::log(4.0), 1e-14);
  EXPECT_NEAR(*r.rankme_star, 1.0, 1e-14);
  EXPECT_NEAR(*r.stable_rank, 4.0, 1e-14);
  EXPECT_NEAR(r.cond_number->value, 1.0, 1e-14);
  EXPECT_NEAR(r.coherence->combined, 1.0, 1e-12);
  // Centred identity rows: covariance I/4 - J/16 has eigenvalues (1/4, 1/4, 1/4, 0).
  EXPECT_NEAR(*r.nesum, 3.0, 1e-12);
  embq::ReportOptions raw;
  raw.center = false;
  EXPECT_NEAR(*embq::full_report(to_embedding(Eigen::MatrixXd::Identity(4, 4)), raw).nesum, 4.0, 1e-12);
}

TEST(FullReport, ZeroMatrixListsEveryUndefinedMetric) {
  try {
    embq::full_report(EmbeddingMatrix(3, 3, std::vector<double>(9, 0.0)));
    FAIL();
  } catch (const embq::MetricsError& e) {
    std::vector<std::string> names;
    for (const auto& f : e.failures()) names.push_back(f.metric);
    for (const char* want : {"alpha_req", "rankme", "rankme_star", "stable_rank", "cond_number", "coherence"}) {
      EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    }
    EXPECT_EQ(std::find(names.begin(), names.end(), "nesum"), names.end());
    EXPECT_EQ(e.kind(), embq::ErrorKind::domain);
  }
}

TEST(FullReport, PartialKeepsDefinedMetrics) {
  embq::ReportOptions options;
  options.allow_partial = true;
  const auto r = embq::full_report(EmbeddingMatrix(3, 3, std::vector<double>(9, 0.0)), options);
  EXPECT_EQ(*r.nesum, 0.0);
  EXPECT_FALSE(r.rankme.has_value());
  EXPECT_FALSE(r.undefined.empty());
}

TEST(FullReport, FieldsEqualIndividualOps) {
  const Eigen::MatrixXd x = oracle::gaussian(128, 16, 41);
  const auto m = to_embedding(x);
  embq::ReportOptions options;
  options.normalize_rows = true;
  const auto r = embq::full_report(m, options);
  const auto w = embq::normalize_rows(m);
  const auto s = embq::compute_spectrum(w);
  EXPECT_NEAR(*r.alpha_req, embq::alpha_req(s), 1e-12);
  EXPECT_NEAR(*r.rankme, embq::rankme(s), 1e-12);
  EXPECT_NEAR(*r.rankme_star, embq::rankme_star(s), 1e-12);
  EXPECT_NEAR(*r.nesum, embq::nesum(embq::compute_covariance_spectrum(w)), 1e-12);
  EXPECT_NEAR(*r.stable_rank, embq::stable_rank(s), 1e-12);
  EXPECT_NEAR(r.cond_number->value, embq::cond_number(s).value, 1e-12);
  EXPECT_NEAR(r.coherence->combined, embq::coherence(s).combined, 1e-12);
  EXPECT_NEAR(*r.self_cluster, embq::self_cluster(w), 1e-12);
  for (const auto& [name, value] : r.named_values()) {
    EXPECT_NEAR(embq::evaluate_metric(name, m, options), value, 1e-12) << name;
  }
}

TEST(FullReport, SelfClusterOnlyForUnitRows) {
  const Eigen::MatrixXd x = oracle::gaussian(20, 4, 42);
  EXPECT_FALSE(embq::full_report(to_embedding(x)).self_cluster.has_value());
  EXPECT_TRUE(embq::full_report(embq::gen_sphere(20, 4, 1)).self_cluster.has_value());
}

TEST(EvaluateMetric, UnknownNameIsUsageError) {
  EXPECT_THROW(embq::evaluate_metric("rank_me", to_embedding(Eigen::MatrixXd::Identity(2, 2))), embq::UsageError);
}

TEST(MetricOrder, BoundsHoldOnRandomMatrices) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 5 + seed * 3;
    const std::size_t d = 2 + seed % 9;
    Eigen::MatrixXd x = oracle::gaussian(n, d, 500 + seed);
    if (seed % 3 == 0) x.col(0).setZero();
    embq::ReportOptions options;
    options.allow_partial = true;
    const auto r = embq::full_report(to_embedding(x), options);
    const double rank = static_cast<double>(r.rank);
    EXPECT_LE(*r.rankme, std::log(rank) + 1e-12);
    EXPECT_GE(*r.rankme_star, 0.0);
    EXPECT_LE(*r.rankme_star, 1.0 + 1e-12);
    EXPECT_GE(*r.stable_rank, 1.0);
    EXPECT_LE(*r.stable_rank, rank + 1e-12);
    EXPECT_GE(r.coherence->combined, 1.0 - 1e-12);
    EXPECT_LE(r.coherence->combined, static_cast<double>(std::max(n, d)) / rank + 1e-12);
    EXPECT_GE(r.cond_number->value, 1.0);
    EXPECT_GE(*r.nesum, 1.0 - 1e-12);
  }
}

TEST(MetricInvariance, ScalePermutationRotation) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Eigen::MatrixXd x = oracle::gaussian(40, 8, 700 + seed);
    const auto base = embq::full_report(to_embedding(x));
    auto compare = [&](const Eigen::MatrixXd& y, bool rotated) {
      const auto r = embq::full_report(to_embedding(y));
      const auto a = base.named_values();
      const auto b = r.named_values();
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (rotated && (a[i].first == "coherence_right" || a[i].first == "coherence")) continue;
        EXPECT_LT(rel_err(b[i].second, a[i].second), 1e-8) << a[i].first;
      }
    };
    compare(1e3 * x, false);
    compare(1e-3 * x, false);
    compare(x.colwise().reverse(), false);
    compare(x * oracle::random_orthogonal(8, 800 + seed), true);
  }
}

}  // namespace
