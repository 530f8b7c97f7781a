// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "embq/analysis.hpp"
#include "embq/commands.hpp"
#include "embq/datagen.hpp"
#include "embq/metrics.hpp"
#include "embq/probe.hpp"
#include "embq/random.hpp"
#include "support/cli.hpp"
#include "support/helpers.hpp"
#include "support/oracle.hpp"

namespace {

using embq::EmbeddingMatrix;
using testing_support::to_dense;
using testing_support::to_embedding;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::abs(want);
}

// A mix of well-conditioned, badly scaled, exactly rank-deficient and
// clustered matrices.
Eigen::MatrixXd random_instance(std::uint64_t i) {
  std::mt19937_64 gen(1000 + i);
  const std::size_t n = 4 + gen() % 125;
  const std::size_t d = 2 + gen() % 31;
  Eigen::MatrixXd x = oracle::gaussian(n, d, 2000 + i);
  switch (i % 4) {
    case 1:
      for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j) *= std::pow(10.0, -2.0 + 4.0 * (gen() % 1000) / 999.0);
      break;
    case 2:
      for (Eigen::Index j = 0; j < x.cols(); j += 3) x.col(j).setZero();
      break;
    case 3:
      x = to_dense(embq::gen_clustered(n, d, 1 + gen() % std::min<std::size_t>(n, 6), 0.3, 3000 + i));
      break;
    default:
      break;
  }
  return x;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t compared = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Eigen::MatrixXd x = random_instance(i);
    const std::size_t n = static_cast<std::size_t>(x.rows());
    const std::size_t d = static_cast<std::size_t>(x.cols());
    embq::ReportOptions options;
    options.allow_partial = true;
    const auto r = embq::full_report(to_embedding(x), options);

    const auto svd = oracle::jacobi_svd(x);
    const std::size_t rank = oracle::rank(svd.sigma, n, d);
    o.require(r.rank == rank, "rank mismatch on instance " + std::to_string(i));
    const auto coh = oracle::coherence(svd, rank);
    std::vector<std::pair<std::string, std::pair<std::optional<double>, double>>> pairs{
        {"rankme", {r.rankme, oracle::rankme(svd.sigma, rank)}},
        {"rankme_star", {r.rankme_star, oracle::rankme_star(svd.sigma, rank, n, d)}},
        {"nesum", {r.nesum, oracle::nesum(oracle::covariance_eigenvalues(x, true))}},
        {"stable_rank", {r.stable_rank, oracle::stable_rank(svd.sigma)}},
        {"cond_number", {r.cond_number ? std::optional(r.cond_number->value) : std::nullopt,
                         oracle::cond_number(svd.sigma, rank)}},
        {"coherence_left", {r.coherence ? std::optional(r.coherence->left) : std::nullopt, std::max(1.0, coh.left)}},
        {"coherence_right", {r.coherence ? std::optional(r.coherence->right) : std::nullopt, std::max(1.0, coh.right)}},
        {"coherence", {r.coherence ? std::optional(r.coherence->combined) : std::nullopt, std::max(1.0, coh.combined)}},
    };
    if (rank >= 2) pairs.push_back({"alpha_req", {r.alpha_req, oracle::alpha_req(svd.sigma, rank)}});

    // self_cluster on the row-normalised matrix against the pairwise loop.
    Eigen::MatrixXd w = x;
    bool zero_row = false;
    for (Eigen::Index k = 0; k < w.rows(); ++k) {
      const double norm = w.row(k).norm();
      zero_row = zero_row || norm == 0.0;
      if (norm > 0.0) w.row(k) /= norm;
    }
    if (!zero_row) {
      embq::ReportOptions normalized;
      normalized.normalize_rows = true;
      normalized.allow_partial = true;
      pairs.push_back({"self_cluster", {embq::full_report(to_embedding(x), normalized).self_cluster, oracle::self_cluster(w)}});
    }

    for (const auto& [name, values] : pairs) {
      const auto& [got, want] = values;
      if (!got) {
        o.require(false, name + " undefined on instance " + std::to_string(i));
        continue;
      }
      const double e = rel(*got, want);
      worst = std::max(worst, e);
      ++compared;
      o.require(e <= 1e-8, name + " rel err " + fmt("%.3g", e) + " on instance " + std::to_string(i));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 30.0, "runtime " + fmt("%.1f", secs) + " s");
  o.detail = std::to_string(compared) + " comparisons on 100 matrices, worst rel err " + fmt("%.2e", worst) +
             ", " + fmt("%.1f", secs) + " s (limit 30 s)";
  return o;
}

Outcome self_cluster_gram_trick() {
  Outcome o;
  double worst = 0.0;
  std::size_t idx = 0;
  for (std::size_t n : {2u, 16u, 100u, 257u, 512u}) {
    for (std::size_t d : {2u, 8u, 64u}) {
      const auto sets = {embq::gen_sphere(n, d, 10 + idx), embq::gen_clustered(n, d, std::min<std::size_t>(n, 5), 0.2, 20 + idx)};
      for (const auto& w : sets) {
        const double e = rel(embq::self_cluster(w), oracle::self_cluster(to_dense(w)));
        worst = std::max(worst, e);
        o.require(e <= 1e-10, "rel err " + fmt("%.3g", e) + " at n=" + std::to_string(n) + " d=" + std::to_string(d));
      }
      ++idx;
    }
  }
  const auto big = embq::gen_sphere(100000, 128, 7);
  const auto t0 = std::chrono::steady_clock::now();
  const double value = embq::self_cluster(big);
  const double secs = seconds_since(t0);
  o.require(secs < 10.0, "n=100000 took " + fmt("%.2f", secs) + " s");
  o.require(std::isfinite(value), "non-finite value at n=100000");
  o.detail = "worst rel err " + fmt("%.2e", worst) + " for n <= 512; n=100000 d=128 in " + fmt("%.2f", secs) +
             " s (limit 10 s), value " + fmt("%.2e", value);
  return o;
}

Outcome sphere_centering() {
  Outcome o;
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) sum += embq::self_cluster(embq::gen_sphere(2048, 64, seed));
  const double mean = sum / 20.0;
  o.require(std::abs(mean) <= 0.01, "mean " + fmt("%.3g", mean));
  o.detail = "mean self_cluster over 20 seeds " + fmt("%.3e", mean) + " (limit +-0.01)";
  return o;
}

Outcome collapse_detection() {
  Outcome o;
  double prev = -1.0;
  std::string detail;
  for (std::size_t k : {1u, 8u, 32u, 64u}) {
    embq::ReportOptions options;
    options.allow_partial = true;
    const auto r = embq::full_report(embq::gen_collapsed(4096, 64, k, 40 + k), options);
    o.require(r.rank == k, "rank " + std::to_string(r.rank) + " for k=" + std::to_string(k));
    const double star = r.rankme_star.value_or(-1.0);
    o.require(star > prev, "rankme_star not increasing at k=" + std::to_string(k));
    prev = star;
    detail += (detail.empty() ? "" : ", ") + ("k=" + std::to_string(k) + ": rank " + std::to_string(r.rank) +
                                               " rankme* " + fmt("%.4f", star));
  }
  o.detail = detail;
  return o;
}

Outcome power_law_recovery() {
  Outcome o;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    std::vector<double> sigma;
    for (int i = 1; i <= 64; ++i) sigma.push_back(std::pow(static_cast<double>(i), -alpha));
    const double direct = embq::alpha_req(embq::Spectrum::from_singular_values(sigma, 128, 64));
    // Same spectrum realised as a dense matrix U diag(sigma) V^T.
    const Eigen::MatrixXd u = oracle::random_orthogonal(128, 50).leftCols(64);
    const Eigen::MatrixXd v = oracle::random_orthogonal(64, 51);
    const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sigma.data(), 64);
    const Eigen::MatrixXd x = u * s.asDiagonal() * v.transpose();
    const double dense = embq::alpha_req(embq::compute_spectrum(to_embedding(x), {.vectors = false}));
    for (double got : {direct, dense}) {
      worst = std::max(worst, std::abs(got - alpha));
      o.require(std::abs(got - alpha) <= 1e-6, "alpha " + fmt("%.2f", alpha) + " recovered as " + fmt("%.12g", got));
    }
  }
  o.detail = "alpha in {0.5, 1, 2}, from spectra and dense matrices: worst |err| " + fmt("%.2e", worst) + " (limit 1e-6)";
  return o;
}

Outcome invariance_suite() {
  Outcome o;
  double worst = 0.0;
  std::size_t checks = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 20 + 5 * i;
    const std::size_t d = 4 + i % 13;
    const Eigen::MatrixXd x = oracle::gaussian(n, d, 4000 + i);
    embq::ReportOptions options;
    options.normalize_rows = true;
    const auto base = embq::full_report(to_embedding(x), options).named_values();
    embq::ReportOptions raw;
    const auto base_raw = embq::full_report(to_embedding(x), raw).named_values();

    auto compare = [&](const std::vector<std::pair<std::string, double>>& a,
                       const std::vector<std::pair<std::string, double>>& b, const std::string& what,
                       const std::vector<std::string>& skip) {
      o.require(a.size() == b.size(), what + ": metric sets differ");
      for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        if (std::find(skip.begin(), skip.end(), a[k].first) != skip.end()) continue;
        const double e = rel(b[k].second, a[k].second);
        worst = std::max(worst, e);
        ++checks;
        o.require(e <= 1e-8, what + " " + a[k].first + " rel err " + fmt("%.3g", e) + " instance " + std::to_string(i));
      }
    };

    for (double c : {1e-3, 1.0, 1e3}) {
      compare(base_raw, embq::full_report(to_embedding(c * x), raw).named_values(), "scale " + fmt("%g", c), {});
    }
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5000 + i));
    Eigen::MatrixXd permuted(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) permuted.row(r) = x.row(perm[static_cast<std::size_t>(r)]);
    compare(base, embq::full_report(to_embedding(permuted), options).named_values(), "permutation", {});
    const Eigen::MatrixXd rotated = x * oracle::random_orthogonal(d, 6000 + i);
    compare(base, embq::full_report(to_embedding(rotated), options).named_values(), "rotation",
            {"coherence_right", "coherence"});
  }
  o.detail = std::to_string(checks) + " metric comparisons over 20 instances x (3 scales, permutation, rotation), worst rel err " +
             fmt("%.2e", worst) + " (limit 1e-8)";
  return o;
}

Outcome probe_loss_identity() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::mt19937_64 gen(7000 + i);
    const std::size_t n = 5 + gen() % 120;
    const std::size_t d = 1 + gen() % 24;
    const std::size_t c = 2 + gen() % 5;
    const Eigen::MatrixXd x = oracle::gaussian(n, d, 8000 + i);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = gen() % c;
    const embq::LabelMatrix y(labels, c);
    const auto model = embq::fit_probe(to_embedding(x), y);
    const double loss = embq::mse_loss(model, to_embedding(x), y);

    const auto svd = oracle::jacobi_svd(x);
    const auto r = static_cast<Eigen::Index>(oracle::rank(svd.sigma, n, d));
    const Eigen::MatrixXd oh = y.one_hot();
    const double want = oh.squaredNorm() - (svd.u.leftCols(r).transpose() * oh).squaredNorm();
    worst = std::max(worst, std::abs(loss - want));
    o.require(std::abs(loss - want) <= 1e-8, "instance " + std::to_string(i) + " |diff| " + fmt("%.3g", std::abs(loss - want)));
  }
  o.detail = "100 instances, worst |MSE - (||Y||^2 - ||U_r^T Y||^2)| " + fmt("%.2e", worst) + " (limit 1e-8)";
  return o;
}

Outcome rankme_lower_bound() {
  Outcome o;
  const auto m = embq::gen_clustered(16384, 128, 16, 0.3, 9);
  std::vector<std::size_t> batches;
  for (std::size_t b = 128; b <= 8192; b *= 2) batches.push_back(b);
  const auto p = embq::stability_profile(m, "rankme", batches, 20, 10);
  std::string detail;
  double prev = 0.0;
  for (const auto& pt : p.points) {
    const double f = pt.mean_factor.value_or(0.0);
    o.require(pt.lower_bound_rate >= 0.95, "lower_bound_rate " + fmt("%.2f", pt.lower_bound_rate) + " at batch " +
                                               std::to_string(pt.batch));
    o.require(f >= prev, "mean factor decreased at batch " + std::to_string(pt.batch));
    prev = f;
    detail += (detail.empty() ? "" : " ") + (std::to_string(pt.batch) + ":" + fmt("%.4f", f) + "/" +
                                             fmt("%.2f", pt.lower_bound_rate));
  }
  o.detail = "batch:factor/rate " + detail;
  return o;
}

Outcome sparsifier_contracts() {
  Outcome o;
  std::size_t graphs = 0;
  std::size_t naive_disconnected = 0;
  std::size_t calls = 0;
  for (std::uint64_t seed = 0; graphs < 50; ++seed) {
    std::mt19937_64 gen(9000 + seed);
    const std::size_t blocks = 2 + gen() % 3;
    std::vector<std::size_t> sizes;
    for (std::size_t b = 0; b < blocks; ++b) sizes.push_back(20 + gen() % 41);
    const auto g = embq::sbm_generate({sizes, 0.15 + 0.1 * (gen() % 3), 0.02, seed}).graph;
    if (!embq::is_connected(g)) continue;
    ++graphs;
    const std::size_t n = g.node_count();
    const double tree_degree = 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
    for (double t : {1.1, tree_degree, 2.5, 4.0, 7.0, g.average_degree()}) {
      if (t > g.average_degree()) continue;
      const std::size_t budget = embq::edge_budget(n, t);
      const auto naive = embq::sparsify_naive(g, t, seed * 31 + calls);
      o.require(naive.edge_count() == budget, "naive edge count");
      if (t == 1.1 && !embq::is_connected(naive)) ++naive_disconnected;
      ++calls;
      if (budget + 1 < n) continue;
      const auto conn = embq::sparsify_connected(g, t, seed * 31 + calls);
      o.require(conn.edge_count() == budget, "connected edge count");
      o.require(embq::is_connected(conn), "connected mode produced a disconnected graph");
      ++calls;
    }
  }
  o.require(naive_disconnected > 0, "naive never disconnected at degree 1.1");
  o.detail = "50 graphs, " + std::to_string(calls) + " sparsifications; naive disconnected at 1.1 in " +
             std::to_string(naive_disconnected) + "/50";
  return o;
}

embq::ExperimentArgs experiment_args(std::uint64_t seed) {
  embq::ExperimentArgs args;
  args.sbm = embq::parse_sbm("4x250,0.3,0.02");
  args.degrees = {1.1, 10.0, 8.9 / 7.0};
  args.embeds = 10;
  args.probes = 10;
  args.dim = 16;
  args.seed = seed;
  return args;
}

Outcome end_to_end_experiment() {
  Outcome o;
  std::string detail;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const embq::Json report = embq::cmd_experiment(experiment_args(seed));
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    const auto& p = report["payload"];
    o.require(p["degrees"].size() == 8, "schedule does not have 8 degrees");
    const auto& rho = p["correlations"]["connected"]["accuracy_vs_degree"];
    const double value = rho.is_number() ? rho.get<double>() : -2.0;
    o.require(value >= 0.9, "seed " + std::to_string(seed) + " rho " + fmt("%.3f", value));
    for (const char* mode : {"naive", "connected"}) {
      for (const auto& name : embq::metric_names()) {
        o.require(p["correlations"][mode]["metric_vs_accuracy"].contains(name), std::string("missing rho for ") + name);
      }
    }
    o.require(secs < 300.0, "seed " + std::to_string(seed) + " took " + fmt("%.0f", secs) + " s");
    detail += (detail.empty() ? "" : ", ") + ("seed " + std::to_string(seed) + ": " + fmt("%.3f", value));
  }
  o.detail = "rho(accuracy, degree) connected " + detail + "; slowest run " + fmt("%.1f", slowest) + " s (limit 300 s)";
  return o;
}

Outcome determinism() {
  Outcome o;
  testing_support::TempDir dir("accept");
  const auto m = embq::gen_clustered(3000, 32, 8, 0.3, 77);
  embq::write_matrix(dir / "m.npy", m, embq::MatrixFormat::npy);
  const auto lg = embq::sbm_generate({{100, 100, 100}, 0.1, 0.01, 5});
  embq::write_graph(dir / "g.txt", lg.graph);

  const std::vector<std::vector<std::string>> commands{
      {"stability", "--input", (dir / "m.npy").string(), "--metric", "rankme", "--batches", "64,256,1024,3000",
       "--trials", "10", "--seed", "42"},
      {"stability", "--input", (dir / "m.npy").string(), "--metric", "self_cluster", "--batches", "100,1000",
       "--trials", "5", "--seed", "43", "--normalize-rows"},
      {"sparsify", "--graph", (dir / "g.txt").string(), "--mode", "naive", "--target-degree", "3", "--seed", "7",
       "--out", (dir / "naive.txt").string()},
      {"sparsify", "--graph", (dir / "g.txt").string(), "--mode", "connected", "--target-degree", "3", "--seed",
       "7", "--out", (dir / "conn.txt").string()},
      {"experiment", "--sbm", "4x250,0.3,0.02", "--degrees", "1.1:10:1.2714285714285714", "--embeds", "3",
       "--probes", "5", "--dim", "16", "--seed", "3"},
  };
  std::size_t identical = 0;
  for (const auto& c : commands) {
    const auto a = testing_support::run_cli(c);
    std::string graph_a;
    if (c[0] == "sparsify") graph_a = testing_support::slurp(c.back());
    const auto b = testing_support::run_cli(c);
    std::string graph_b;
    if (c[0] == "sparsify") graph_b = testing_support::slurp(c.back());
    const bool same = a.code == 0 && b.code == 0 && !a.out.empty() && a.out == b.out && graph_a == graph_b;
    o.require(same, c[0] + " output differs between runs (exit " + std::to_string(a.code) + ")");
    identical += same;
  }
  o.detail = std::to_string(identical) + "/" + std::to_string(commands.size()) +
             " seeded CLI invocations byte-identical across two runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle-equivalence", oracle_equivalence},
      {"selfcluster-gram-trick", self_cluster_gram_trick},
      {"sphere-centering", sphere_centering},
      {"collapse-detection", collapse_detection},
      {"power-law-recovery", power_law_recovery},
      {"invariance-suite", invariance_suite},
      {"probe-loss-identity", probe_loss_identity},
      {"rankme-lower-bound", rankme_lower_bound},
      {"sparsifier-contracts", sparsifier_contracts},
      {"end-to-end-experiment", end_to_end_experiment},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.first_failure = std::string("exception: ") + e.what();
    }
    std::printf("%s  %-24s %s%s%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                o.pass ? "" : " | first failure: ", o.pass ? "" : o.first_failure.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
