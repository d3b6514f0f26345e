#include "riskml/knn.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace riskml {

KnnModel make_knn(Matrix points, Labels labels, std::size_t k) {
  if (points.empty()) throw std::invalid_argument("make_knn: empty training set");
  if (points.rows() != labels.size()) throw std::invalid_argument("make_knn: label count mismatch");
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("make_knn: k must lie in [1, " + std::to_string(points.rows()) + "]");
  }
  return KnnModel{std::move(points), std::move(labels), k};
}

std::vector<std::size_t> knn_neighbors(const KnnModel& model, std::span<const double> x,
                                       std::optional<std::size_t> exclude) {
  if (model.points.empty()) throw std::invalid_argument("knn: empty model");
  if (x.size() != model.points.cols()) {
    throw std::invalid_argument("knn: expected " + std::to_string(model.points.cols()) + " features, got " +
                                std::to_string(x.size()));
  }
  const std::size_t available = model.points.rows() - (exclude && *exclude < model.points.rows() ? 1 : 0);
  if (model.k > available) throw std::invalid_argument("knn: k exceeds the number of candidate points");

  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(model.points.rows());
  for (std::size_t i = 0; i < model.points.rows(); ++i) {
    if (exclude && *exclude == i) continue;
    const auto p = model.points.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double d = p[j] - x[j];
      d2 += d * d;
    }
    candidates.emplace_back(d2, i);
  }
  const auto kth = candidates.begin() + static_cast<long>(model.k);
  std::partial_sort(candidates.begin(), kth, candidates.end());
  std::vector<std::size_t> out;
  out.reserve(model.k);
  for (auto it = candidates.begin(); it != kth; ++it) out.push_back(it->second);
  return out;
}

double knn_predict_proba(const KnnModel& model, std::span<const double> x, std::optional<std::size_t> exclude) {
  std::size_t positive = 0;
  for (auto i : knn_neighbors(model, x, exclude)) positive += model.labels[i] == 1 ? 1 : 0;
  return static_cast<double>(positive) / static_cast<double>(model.k);
}

}  // namespace riskml
