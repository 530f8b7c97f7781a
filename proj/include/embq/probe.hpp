#pragma once

// Closed-form least-squares linear probe W* = X^+ Y (no bias, no ridge).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "embq/matrix.hpp"

namespace embq {

/// One-hot n x c target matrix; c >= 2 and every label < c.
class LabelMatrix {
 public:
  LabelMatrix(std::vector<std::size_t> labels, std::size_t classes);

  std::size_t n() const { return labels_.size(); }
  std::size_t classes() const { return classes_; }
  std::span<const std::size_t> labels() const { return labels_; }

  Eigen::MatrixXd one_hot() const;
  LabelMatrix subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::size_t> labels_;
  std::size_t classes_;
};

struct ProbeModel {
  Eigen::MatrixXd weights;  // d x c
};

/// Minimum-norm least-squares fit via the tolerance-truncated SVD of x.
ProbeModel fit_probe(const EmbeddingMatrix& x, const LabelMatrix& y);

/// Fraction of rows whose argmax(x W) equals the label; ties go to the
/// lowest class index.
double predict_accuracy(const ProbeModel& model, const EmbeddingMatrix& x, const LabelMatrix& y);

/// ||Y - X W||_F^2, without a 1/n factor.
double mse_loss(const ProbeModel& model, const EmbeddingMatrix& x, const LabelMatrix& y);

/// Seeded 80/20 train/test split of rows [0, n): shuffles the indices with
/// CounterRng(seed) and puts the first round(0.8 n) in train. Both parts
/// are returned in ascending order.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split train_test_split(std::size_t n, std::uint64_t seed, double train_fraction = 0.8);

EmbeddingMatrix select_rows(const EmbeddingMatrix& m, std::span<const std::size_t> rows);

}  // namespace embq
