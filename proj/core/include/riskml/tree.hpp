#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "riskml/matrix.hpp"
#include "riskml/random.hpp"

namespace riskml {

/// One node of a binary decision tree stored in a flat array. Internal nodes send x
/// left iff x[feature] < threshold. Leaves hold `value`: the positive-class fraction
/// for classification trees, the leaf weight for boosting regression trees.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
  std::array<double, 2> class_counts{};  // (negative, positive), possibly weighted

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at index 0
  std::size_t feature_count = 0;

  std::size_t leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes[leaf_index(x)].value; }
  std::size_t split_count() const;
  std::size_t leaf_count() const { return nodes.size() - split_count(); }
  std::size_t depth() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

struct TreeConfig {
  int max_depth = 6;
  std::size_t min_samples_leaf = 5;
  std::size_t min_samples_split = 10;

  void validate() const;
};

/// 1 - sum p_i^2 for (negative, positive) counts. Throws on a zero total.
double gini_impurity(double negatives, double positives);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;  // parent Gini minus size-weighted child Gini
};

/// Gains closer than this are ties, resolved by the lower feature index, then the lower threshold.
inline constexpr double kGainTieTolerance = 1e-12;

/// Exhaustive Gini split search over midpoints between consecutive distinct values of
/// each candidate feature. Both children must hold at least min_samples_leaf samples.
/// Returns nothing when the labels are pure or no threshold is admissible.
/// `samples` may repeat rows (bootstrap); `weights`, when non-empty, weights every row.
std::optional<SplitCandidate> find_best_split(const Matrix& x, std::span<const int> y,
                                              std::span<const std::size_t> samples,
                                              std::span<const std::size_t> candidate_features,
                                              std::size_t min_samples_leaf = 1,
                                              std::span<const double> weights = {});

struct TreeGrowOptions {
  std::span<const std::size_t> samples;  // empty = every row once
  std::span<const double> weights;       // empty = unit weights
  std::size_t features_per_split = 0;    // 0 or >= cols = all features
  Rng* rng = nullptr;                    // required when sampling features
};

Tree train_decision_tree(const Matrix& x, std::span<const int> y, const TreeConfig& config,
                         const TreeGrowOptions& options = {});

/// Leaf probability of the routed leaf; throws on dimension mismatch.
double predict_tree(const Tree& tree, std::span<const double> x);

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t features_per_split = 3;  // ceil(sqrt(7))
  bool bootstrap = true;
  TreeConfig tree{};
  std::uint64_t seed = 42;

  void validate(std::size_t feature_count) const;
};

struct RandomForest {
  std::vector<Tree> trees;
  friend bool operator==(const RandomForest&, const RandomForest&) = default;
};

/// Tree t draws its bootstrap sample and split features from stream (seed, kForestTreeBase + t).
RandomForest train_random_forest(const Matrix& x, std::span<const int> y, const ForestConfig& config);
Tree train_forest_member(const Matrix& x, std::span<const int> y, const ForestConfig& config, std::size_t tree_id);

/// Mean of member leaf probabilities.
double predict_forest(const RandomForest& forest, std::span<const double> x);
/// Mode of member hard votes (probability >= 0.5 counts as a positive vote); a tied vote is positive.
int forest_vote(const RandomForest& forest, std::span<const double> x);

}  // namespace riskml
