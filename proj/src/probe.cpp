#include "embq/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "embq/error.hpp"
#include "embq/random.hpp"

namespace embq {
namespace {

void check_rows(const EmbeddingMatrix& x, const LabelMatrix& y) {
  if (x.n() != y.n()) {
    throw DataError("probe shape mismatch: " + std::to_string(x.n()) + " embedding rows vs " +
                    std::to_string(y.n()) + " labels");
  }
}

void check_model(const ProbeModel& model, const EmbeddingMatrix& x, const LabelMatrix& y) {
  check_rows(x, y);
  if (static_cast<std::size_t>(model.weights.rows()) != x.d() ||
      static_cast<std::size_t>(model.weights.cols()) != y.classes()) {
    throw DataError("probe weights are " + std::to_string(model.weights.rows()) + " x " +
                    std::to_string(model.weights.cols()) + ", expected " + std::to_string(x.d()) +
                    " x " + std::to_string(y.classes()));
  }
}

}  // namespace

LabelMatrix::LabelMatrix(std::vector<std::size_t> labels, std::size_t classes)
    : labels_(std::move(labels)), classes_(classes) {
  if (classes_ < 2) throw DataError("label matrix needs at least 2 classes");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= classes_) {
      throw DataError("label " + std::to_string(labels_[i]) + " at row " + std::to_string(i) +
                      " is not below class count " + std::to_string(classes_));
    }
  }
}

Eigen::MatrixXd LabelMatrix::one_hot() const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n()),
                                            static_cast<Eigen::Index>(classes_));
  for (std::size_t i = 0; i < n(); ++i) {
    y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels_[i])) = 1.0;
  }
  return y;
}

LabelMatrix LabelMatrix::subset(std::span<const std::size_t> rows) const {
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(labels_.at(r));
  return LabelMatrix(std::move(out), classes_);
}

ProbeModel fit_probe(const EmbeddingMatrix& x, const LabelMatrix& y) {
  check_rows(x, y);
  const ThinSvd svd = truncated_svd(x);
  // W = V_r diag(1/sigma_r) U_r^T Y
  Eigen::MatrixXd projected = svd.u.transpose() * y.one_hot();
  projected.array().colwise() /= svd.sigma.array();
  return {svd.v * projected};
}

double predict_accuracy(const ProbeModel& model, const EmbeddingMatrix& x, const LabelMatrix& y) {
  check_model(model, x, y);
  const Eigen::MatrixXd scores = x.view() * model.weights;
  std::size_t hits = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    if (static_cast<std::size_t>(best) == y.labels()[static_cast<std::size_t>(i)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(x.n());
}

double mse_loss(const ProbeModel& model, const EmbeddingMatrix& x, const LabelMatrix& y) {
  check_model(model, x, y);
  return (y.one_hot() - x.view() * model.weights).squaredNorm();
}

Split train_test_split(std::size_t n, std::uint64_t seed, double train_fraction) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);
  const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

EmbeddingMatrix select_rows(const EmbeddingMatrix& m, std::span<const std::size_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size() * m.d());
  for (std::size_t r : rows) {
    const auto row = m.row(r);
    out.insert(out.end(), row.begin(), row.end());
  }
  return EmbeddingMatrix(rows.size(), m.d(), std::move(out));
}

}  // namespace embq
