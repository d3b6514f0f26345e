#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "riskml/generator.hpp"
#include "riskml/random.hpp"
#include "riskml/split.hpp"
#include "riskml/tree.hpp"

using namespace riskml;

namespace {

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

const Matrix kFourX = Matrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}});
const Labels kFourY{0, 0, 1, 1};

TreeConfig unlimited() {
  TreeConfig c;
  c.max_depth = 64;
  c.min_samples_leaf = 1;
  c.min_samples_split = 2;
  return c;
}

double test_accuracy(const std::function<double(std::span<const double>)>& proba, const Dataset& test) {
  const auto x = test.features();
  const auto y = test.labels();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) ok += (proba(x.row(i)) >= 0.5) == (y[i] == 1);
  return static_cast<double>(ok) / static_cast<double>(x.rows());
}

}  // namespace

TEST(Gini, Examples) {
  EXPECT_EQ(gini_impurity(10, 0), 0.0);
  EXPECT_EQ(gini_impurity(5, 5), 0.5);
  EXPECT_NEAR(gini_impurity(3, 1), 0.375, 1e-12);
  EXPECT_THROW(gini_impurity(0, 0), std::invalid_argument);
}

TEST(BestSplit, PureSetHasNoSplit) {
  const auto samples = iota_n(4);
  const std::vector<std::size_t> features{0};
  EXPECT_FALSE(find_best_split(kFourX, Labels{1, 1, 1, 1}, samples, features).has_value());
}

TEST(BestSplit, FourPointExample) {
  const auto samples = iota_n(4);
  const std::vector<std::size_t> features{0};
  const auto s = find_best_split(kFourX, kFourY, samples, features);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->feature, 0u);
  EXPECT_EQ(s->threshold, 1.5);
  EXPECT_NEAR(s->impurity_decrease, 0.5, 1e-12);
}

TEST(BestSplit, TieGoesToLowestFeature) {
  const auto x = Matrix::from_rows({{0.0, 10.0}, {1.0, 11.0}, {2.0, 12.0}, {3.0, 13.0}});
  const auto samples = iota_n(4);
  const std::vector<std::size_t> features{0, 1};
  const auto s = find_best_split(x, kFourY, samples, features);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->feature, 0u);
  const std::vector<std::size_t> reversed{1, 0};
  EXPECT_EQ(find_best_split(x, kFourY, samples, reversed)->feature, 0u);
}

TEST(BestSplit, MatchesExhaustiveScan) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  std::uniform_int_distribution<std::size_t> leaf(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = size(rng);
    auto x = oracle::random_matrix(rng, n, 7, 2);
    // Rounded continuous columns force repeated values.
    if (trial % 2 == 0) {
      for (std::size_t r = 0; r < n; ++r) x(r, 0) = std::round(x(r, 0) * 2.0);
    }
    const auto y = oracle::random_labels(rng, n);
    const auto samples = iota_n(n);
    const auto features = iota_n(7);
    const auto min_leaf = leaf(rng);
    const auto got = find_best_split(x, y, samples, features, min_leaf);
    const auto want = oracle::exhaustive_split(x, y, samples, min_leaf);
    ASSERT_EQ(got.has_value(), want.has_value()) << "trial " << trial;
    if (!got) continue;
    EXPECT_EQ(got->feature, want->feature) << "trial " << trial;
    EXPECT_EQ(got->threshold, want->threshold) << "trial " << trial;
    EXPECT_NEAR(got->impurity_decrease, want->decrease, 1e-12);
    EXPECT_GE(got->impurity_decrease, 0.0);
  }
}

TEST(BestSplit, RespectsMinSamplesLeaf) {
  const auto x = Matrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}});
  const Labels y{1, 0, 0, 0, 0};
  const auto samples = iota_n(5);
  const std::vector<std::size_t> features{0};
  EXPECT_EQ(find_best_split(x, y, samples, features, 1)->threshold, 0.5);
  EXPECT_EQ(find_best_split(x, y, samples, features, 2)->threshold, 1.5);
  EXPECT_FALSE(find_best_split(x, y, samples, features, 3).has_value());
}

TEST(DecisionTree, StumpOnFourPoints) {
  TreeConfig c = unlimited();
  c.max_depth = 1;
  const auto tree = train_decision_tree(kFourX, kFourY, c);
  EXPECT_LE(tree.nodes.size(), 3u);
  EXPECT_EQ(tree.nodes[0].threshold, 1.5);
  EXPECT_EQ(tree.depth(), 1u);
}

TEST(DecisionTree, MemorizesDistinctRows) {
  std::mt19937_64 rng(7);
  const auto x = oracle::random_matrix(rng, 120, 7, 2);
  const auto y = oracle::random_labels(rng, 120);
  const auto tree = train_decision_tree(x, y, unlimited());
  for (std::size_t i = 0; i < x.rows(); ++i) EXPECT_EQ(predict_tree(tree, x.row(i)), y[i] ? 1.0 : 0.0);
}

TEST(DecisionTree, ThresholdRoutesRight) {
  TreeConfig c = unlimited();
  c.max_depth = 1;
  const auto tree = train_decision_tree(kFourX, kFourY, c);
  EXPECT_EQ(predict_tree(tree, std::vector<double>{1.5}), 1.0);
  EXPECT_EQ(predict_tree(tree, std::vector<double>{1.4999}), 0.0);
}

TEST(DecisionTree, SingleLeafProbability) {
  const auto x = Matrix::from_rows({{0.0}, {0.0}, {0.0}, {0.0}, {0.0}, {0.0}, {0.0}, {0.0}});
  const Labels y{0, 0, 1, 1, 1, 1, 1, 1};
  const auto tree = train_decision_tree(x, y, unlimited());
  ASSERT_EQ(tree.nodes.size(), 1u);
  EXPECT_EQ(tree.nodes[0].class_counts, (std::array<double, 2>{2.0, 6.0}));
  EXPECT_EQ(predict_tree(tree, std::vector<double>{3.0}), 0.75);
}

TEST(DecisionTree, EveryTrainingRowReachesOneLeafAndCountsAddUp) {
  const auto d = generate_synthetic(GeneratorConfig{}).dataset;
  const auto x = d.features();
  const auto y = d.labels();
  const auto tree = train_decision_tree(x, y, TreeConfig{});
  std::vector<double> leaf_totals(tree.nodes.size(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto leaf = tree.leaf_index(x.row(i));
    ASSERT_TRUE(tree.nodes[leaf].is_leaf());
    leaf_totals[leaf] += 1.0;
  }
  for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
    if (!tree.nodes[n].is_leaf()) continue;
    const auto& counts = tree.nodes[n].class_counts;
    EXPECT_EQ(counts[0] + counts[1], leaf_totals[n]);
    EXPECT_EQ(tree.nodes[n].value, counts[1] / (counts[0] + counts[1]));
    EXPECT_GE(counts[0] + counts[1], 5.0);
  }
  EXPECT_LE(tree.depth(), 6u);
}

TEST(DecisionTree, Errors) {
  EXPECT_THROW(train_decision_tree(Matrix(0, 7), Labels{}, TreeConfig{}), std::invalid_argument);
  const auto tree = train_decision_tree(kFourX, kFourY, unlimited());
  EXPECT_THROW(predict_tree(tree, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  TreeConfig c;
  c.max_depth = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Forest, SingleTreeWithoutBootstrapEqualsDecisionTree) {
  const auto d = generate_synthetic(GeneratorConfig{.n = 600}).dataset;
  const auto x = d.features();
  const auto y = d.labels();
  ForestConfig c;
  c.n_trees = 1;
  c.bootstrap = false;
  c.features_per_split = 7;
  const auto forest = train_random_forest(x, y, c);
  const auto tree = train_decision_tree(x, y, c.tree);
  ASSERT_EQ(forest.trees.size(), 1u);
  EXPECT_EQ(forest.trees[0], tree);
}

TEST(Forest, ProbabilityIsMeanOfMembers) {
  const auto d = generate_synthetic(GeneratorConfig{.n = 600}).dataset;
  const auto x = d.features();
  const auto y = d.labels();
  ForestConfig c;
  c.n_trees = 15;
  const auto forest = train_random_forest(x, y, c);
  for (std::size_t i = 0; i < 50; ++i) {
    double sum = 0.0;
    int votes = 0;
    for (const auto& t : forest.trees) {
      sum += predict_tree(t, x.row(i));
      votes += predict_tree(t, x.row(i)) >= 0.5;
    }
    EXPECT_NEAR(predict_forest(forest, x.row(i)), sum / 15.0, 1e-12);
    EXPECT_EQ(forest_vote(forest, x.row(i)), 2 * votes >= 15 ? 1 : 0);
  }
}

TEST(Forest, UnanimousVote) {
  const auto x = Matrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}});
  const Labels y{1, 1, 1, 1, 1, 1};
  ForestConfig c;
  c.n_trees = 5;
  c.features_per_split = 1;
  const auto forest = train_random_forest(x, y, c);
  EXPECT_EQ(forest_vote(forest, std::vector<double>{2.5}), 1);
  EXPECT_GT(predict_forest(forest, std::vector<double>{2.5}), 0.5);
}

TEST(Forest, MembersAreOrderIndependent) {
  const auto d = generate_synthetic(GeneratorConfig{.n = 500}).dataset;
  const auto x = d.features();
  const auto y = d.labels();
  ForestConfig c;
  c.n_trees = 6;
  const auto forest = train_random_forest(x, y, c);
  for (std::size_t t = 6; t-- > 0;) EXPECT_EQ(train_forest_member(x, y, c, t), forest.trees[t]);
  EXPECT_EQ(train_random_forest(x, y, c), forest);
}

TEST(Forest, BenchmarkAccuracyAndVarianceReduction) {
  double forest_sum = 0.0, tree_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    const auto split = train_test_split(generate_synthetic(g).dataset, 0.2, seed);
    const auto x = split.train.features();
    const auto y = split.train.labels();
    ForestConfig c;
    c.seed = seed;
    const auto forest = train_random_forest(x, y, c);
    const auto tree = train_decision_tree(x, y, c.tree);
    const double fa = test_accuracy([&](auto r) { return static_cast<double>(forest_vote(forest, r)); }, split.test);
    const double ta = test_accuracy([&](auto r) { return predict_tree(tree, r); }, split.test);
    EXPECT_GE(fa, 0.84) << "seed " << seed;
    forest_sum += fa;
    tree_sum += ta;
  }
  EXPECT_GE(forest_sum / 5.0, tree_sum / 5.0 - 0.02);
}

TEST(Forest, ConfigValidation) {
  ForestConfig c;
  c.features_per_split = 0;
  EXPECT_THROW(c.validate(7), std::invalid_argument);
  c.features_per_split = 8;
  EXPECT_THROW(c.validate(7), std::invalid_argument);
  c = ForestConfig{};
  c.n_trees = 0;
  EXPECT_THROW(c.validate(7), std::invalid_argument);
}
