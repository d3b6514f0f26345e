#include "riskml/tree.hpp"

#include <stdexcept>
#include <string>

namespace riskml {

void ForestConfig::validate(std::size_t feature_count) const {
  if (n_trees < 1) throw std::invalid_argument("ForestConfig: n_trees must be >= 1");
  if (features_per_split < 1 || features_per_split > feature_count) {
    throw std::invalid_argument("ForestConfig: features_per_split must lie in [1, " + std::to_string(feature_count) +
                                "]");
  }
  tree.validate();
}

Tree train_forest_member(const Matrix& x, std::span<const int> y, const ForestConfig& config, std::size_t tree_id) {
  Rng rng = make_rng(config.seed, stream::kForestTreeBase + tree_id);
  std::vector<std::size_t> sample;
  if (config.bootstrap) {
    sample.resize(x.rows());
    for (auto& s : sample) s = static_cast<std::size_t>(uniform_below(rng, x.rows()));
  }
  TreeGrowOptions options;
  options.samples = sample;
  options.features_per_split = config.features_per_split;
  options.rng = &rng;
  return train_decision_tree(x, y, config.tree, options);
}

RandomForest train_random_forest(const Matrix& x, std::span<const int> y, const ForestConfig& config) {
  if (x.empty()) throw std::invalid_argument("train_random_forest: empty training set");
  config.validate(x.cols());
  RandomForest forest;
  forest.trees.reserve(config.n_trees);
  for (std::size_t t = 0; t < config.n_trees; ++t) forest.trees.push_back(train_forest_member(x, y, config, t));
  return forest;
}

double predict_forest(const RandomForest& forest, std::span<const double> x) {
  if (forest.trees.empty()) throw std::invalid_argument("predict_forest: empty forest");
  double sum = 0.0;
  for (const auto& t : forest.trees) sum += predict_tree(t, x);
  return sum / static_cast<double>(forest.trees.size());
}

int forest_vote(const RandomForest& forest, std::span<const double> x) {
  if (forest.trees.empty()) throw std::invalid_argument("forest_vote: empty forest");
  std::size_t positive = 0;
  for (const auto& t : forest.trees) positive += predict_tree(t, x) >= 0.5 ? 1 : 0;
  return 2 * positive >= forest.trees.size() ? 1 : 0;
}

}  // namespace riskml
