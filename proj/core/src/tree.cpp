#include "riskml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace riskml {

std::size_t Tree::leaf_index(std::span<const double> x) const {
  if (nodes.empty()) throw std::logic_error("Tree: empty tree");
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
  }
  return i;
}

std::size_t Tree::split_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const auto& n) { return !n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {  // children always follow their parent
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

void TreeConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("TreeConfig: max_depth must be >= 1");
  if (min_samples_leaf < 1) throw std::invalid_argument("TreeConfig: min_samples_leaf must be >= 1");
}

double gini_impurity(double negatives, double positives) {
  const double total = negatives + positives;
  if (negatives < 0.0 || positives < 0.0) throw std::invalid_argument("gini_impurity: negative count");
  if (!(total > 0.0)) throw std::invalid_argument("gini_impurity: total count is zero");
  const double p = positives / total;
  const double q = negatives / total;
  return 1.0 - (p * p + q * q);
}

std::optional<SplitCandidate> find_best_split(const Matrix& x, std::span<const int> y,
                                              std::span<const std::size_t> samples,
                                              std::span<const std::size_t> candidate_features,
                                              std::size_t min_samples_leaf, std::span<const double> weights) {
  if (samples.size() < 2) return std::nullopt;
  auto weight_of = [&](std::size_t row) { return weights.empty() ? 1.0 : weights[row]; };

  std::array<double, 2> parent{};
  for (auto s : samples) parent[static_cast<std::size_t>(y[s])] += weight_of(s);
  if (parent[0] == 0.0 || parent[1] == 0.0) return std::nullopt;
  const double parent_total = parent[0] + parent[1];
  const double parent_gini = gini_impurity(parent[0], parent[1]);

  std::optional<SplitCandidate> best;
  std::vector<std::size_t> order(samples.begin(), samples.end());
  for (auto feature : candidate_features) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x(a, feature) < x(b, feature); });
    std::array<double, 2> left{};
    for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
      const auto row = order[pos];
      left[static_cast<std::size_t>(y[row])] += weight_of(row);
      const double here = x(row, feature);
      const double next = x(order[pos + 1], feature);
      if (!(here < next)) continue;
      const std::size_t left_n = pos + 1;
      const std::size_t right_n = order.size() - left_n;
      if (left_n < min_samples_leaf || right_n < min_samples_leaf) continue;
      const std::array<double, 2> right{std::max(0.0, parent[0] - left[0]), std::max(0.0, parent[1] - left[1])};
      const double left_total = left[0] + left[1];
      const double right_total = right[0] + right[1];
      if (!(left_total > 0.0) || !(right_total > 0.0)) continue;
      const double child_gini = (left_total * gini_impurity(left[0], left[1]) +
                                 right_total * gini_impurity(right[0], right[1])) / parent_total;
      const double decrease = parent_gini - child_gini;
      const bool tied = best && std::abs(decrease - best->impurity_decrease) <= kGainTieTolerance;
      if (!best || decrease > best->impurity_decrease + kGainTieTolerance || (tied && feature < best->feature)) {
        double threshold = 0.5 * (here + next);
        if (!(threshold > here)) threshold = next;
        best = SplitCandidate{feature, threshold, decrease};
      }
    }
  }
  if (best && best->impurity_decrease < 0.0) best->impurity_decrease = 0.0;  // rounding only
  return best;
}

namespace {

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, std::span<const int> y, const TreeConfig& config, const TreeGrowOptions& options)
      : x_(x), y_(y), config_(config), options_(options) {}

  Tree grow() {
    std::vector<std::size_t> all;
    if (options_.samples.empty()) {
      all.resize(x_.rows());
      std::iota(all.begin(), all.end(), std::size_t{0});
    } else {
      all.assign(options_.samples.begin(), options_.samples.end());
    }
    tree_.feature_count = x_.cols();
    tree_.nodes.emplace_back();
    build(0, std::move(all), 0);
    return std::move(tree_);
  }

 private:
  double weight_of(std::size_t row) const { return options_.weights.empty() ? 1.0 : options_.weights[row]; }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> features(x_.cols());
    std::iota(features.begin(), features.end(), std::size_t{0});
    const auto k = options_.features_per_split;
    if (k == 0 || k >= features.size()) return features;
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(*options_.rng, features.size() - i));
      std::swap(features[i], features[j]);
    }
    features.resize(k);
    std::sort(features.begin(), features.end());
    return features;
  }

  void build(std::size_t node_id, std::vector<std::size_t> samples, int depth) {
    std::array<double, 2> counts{};
    for (auto s : samples) counts[static_cast<std::size_t>(y_[s])] += weight_of(s);
    {
      auto& node = tree_.nodes[node_id];
      node.class_counts = counts;
      const double total = counts[0] + counts[1];
      node.value = total > 0.0 ? counts[1] / total : 0.0;
    }
    if (depth >= config_.max_depth || samples.size() < config_.min_samples_split) return;
    if (counts[0] == 0.0 || counts[1] == 0.0) return;

    const auto features = candidate_features();
    const auto split = find_best_split(x_, y_, samples, features, config_.min_samples_leaf, options_.weights);
    if (!split) return;

    std::vector<std::size_t> left, right;
    for (auto s : samples) (x_(s, split->feature) < split->threshold ? left : right).push_back(s);
    samples.clear();
    samples.shrink_to_fit();

    const auto left_id = tree_.nodes.size();
    tree_.nodes.emplace_back();
    const auto right_id = tree_.nodes.size();
    tree_.nodes.emplace_back();
    auto& node = tree_.nodes[node_id];
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.left = static_cast<std::int32_t>(left_id);
    node.right = static_cast<std::int32_t>(right_id);
    build(left_id, std::move(left), depth + 1);
    build(right_id, std::move(right), depth + 1);
  }

  const Matrix& x_;
  std::span<const int> y_;
  const TreeConfig& config_;
  const TreeGrowOptions& options_;
  Tree tree_;
};

}  // namespace

Tree train_decision_tree(const Matrix& x, std::span<const int> y, const TreeConfig& config,
                         const TreeGrowOptions& options) {
  config.validate();
  if (x.empty()) throw std::invalid_argument("train_decision_tree: empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument("train_decision_tree: label count mismatch");
  if (!options.weights.empty() && options.weights.size() != x.rows()) {
    throw std::invalid_argument("train_decision_tree: weight count mismatch");
  }
  if (options.features_per_split != 0 && options.features_per_split < x.cols() && options.rng == nullptr) {
    throw std::invalid_argument("train_decision_tree: feature sampling needs an rng");
  }
  return TreeGrower(x, y, config, options).grow();
}

double predict_tree(const Tree& tree, std::span<const double> x) {
  if (x.size() != tree.feature_count) {
    throw std::invalid_argument("tree expects " + std::to_string(tree.feature_count) + " features, got " +
                                std::to_string(x.size()));
  }
  return tree.predict(x);
}

}  // namespace riskml
