#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "riskml/matrix.hpp"

namespace riskml {

/// Lazy learner: the whole (standardized) training set is the model.
struct KnnModel {
  Matrix points;
  Labels labels;
  std::size_t k = 5;

  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

KnnModel make_knn(Matrix points, Labels labels, std::size_t k);

/// Indices of the k nearest training points by Euclidean distance, nearest first;
/// equal distances are ordered by lower training index. `exclude` removes one training
/// point from consideration (leave-one-out).
std::vector<std::size_t> knn_neighbors(const KnnModel& model, std::span<const double> x,
                                       std::optional<std::size_t> exclude = std::nullopt);

/// Fraction of positive labels among the k nearest neighbours.
double knn_predict_proba(const KnnModel& model, std::span<const double> x,
                         std::optional<std::size_t> exclude = std::nullopt);

}  // namespace riskml
