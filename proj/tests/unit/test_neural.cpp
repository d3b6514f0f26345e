#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "riskml/generator.hpp"
#include "riskml/mlp.hpp"
#include "riskml/split.hpp"
#include "riskml/standardizer.hpp"

using namespace riskml;

namespace {

// Flattens all weights then biases, layer by layer.
std::vector<double> flatten(const MlpParams& p) {
  std::vector<double> out;
  for (const auto& l : p.layers) {
    out.insert(out.end(), l.weights.values().begin(), l.weights.values().end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

MlpParams unflatten(const MlpParams& shape, const std::vector<double>& flat) {
  MlpParams p = shape;
  std::size_t k = 0;
  for (auto& l : p.layers) {
    for (auto& v : l.weights.values()) v = flat[k++];
    for (auto& v : l.bias) v = flat[k++];
  }
  return p;
}

// Reference forward pass written directly from a_i = f(sum_j w_ij x_j + b_i).
double reference_forward(const MlpParams& p, std::vector<double> a) {
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& layer = p.layers[l];
    std::vector<double> next(layer.weights.rows());
    for (std::size_t i = 0; i < next.size(); ++i) {
      double z = layer.bias[i];
      for (std::size_t j = 0; j < a.size(); ++j) z += layer.weights(i, j) * a[j];
      next[i] = l + 1 == p.layers.size() ? z : std::max(0.0, z);
    }
    a = std::move(next);
  }
  return oracle::sigmoid(a[0]);
}

struct Benchmark {
  Matrix train_x, test_x;
  Labels train_y, test_y;
};

const Benchmark& benchmark() {
  static const Benchmark b = [] {
    const auto split = train_test_split(generate_synthetic(GeneratorConfig{}).dataset, 0.2, 42);
    const auto s = Standardizer::fit(split.train.features());
    return Benchmark{s.transform(split.train.features()), s.transform(split.test.features()), split.train.labels(),
                     split.test.labels()};
  }();
  return b;
}

}  // namespace

TEST(MlpForward, ZeroNetworkGivesHalf) {
  const auto p = make_zero_mlp(MlpArchitecture{});
  EXPECT_EQ(mlp_predict_proba(p, std::vector<double>(7, 1.3)), 0.5);
}

TEST(MlpForward, HandSetSingleHiddenUnit) {
  auto p = make_zero_mlp(MlpArchitecture{{1, 1, 1}});
  p.layers[0].weights(0, 0) = 2.0;
  p.layers[0].bias[0] = -1.0;
  p.layers[1].weights(0, 0) = 1.0;
  const auto pass = mlp_forward(p, std::vector<double>{1.0});
  EXPECT_NEAR(pass.probability, 0.731059, 1e-6);
  EXPECT_EQ(pass.activations[1][0], 1.0);
  EXPECT_EQ(pass.logit, 1.0);
}

TEST(MlpForward, ReluBlocksNegativePreActivation) {
  auto p = make_zero_mlp(MlpArchitecture{{1, 1, 1}});
  p.layers[0].weights(0, 0) = -2.0;
  p.layers[1].weights(0, 0) = 5.0;
  p.layers[1].bias[0] = 0.3;
  EXPECT_NEAR(mlp_predict_proba(p, std::vector<double>{1.0}), oracle::sigmoid(0.3), 1e-15);
}

TEST(MlpForward, MatchesReferenceImplementation) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto p = init_mlp(MlpArchitecture{{7, 16, 8, 1}}, 9);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x(7);
    for (auto& v : x) v = u(rng);
    EXPECT_NEAR(mlp_predict_proba(p, x), reference_forward(p, x), 1e-12);
  }
}

TEST(MlpForward, ShapeMismatchThrows) {
  const auto p = make_zero_mlp(MlpArchitecture{});
  EXPECT_THROW(mlp_forward(p, std::vector<double>(6, 0.0)), std::invalid_argument);
}

TEST(MlpInit, HeUniformBoundsAndSeed) {
  const auto a = init_mlp(MlpArchitecture{}, 1);
  const auto b = init_mlp(MlpArchitecture{}, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, init_mlp(MlpArchitecture{}, 2));
  for (const auto& l : a.layers) {
    const double bound = std::sqrt(6.0 / static_cast<double>(l.weights.cols()));
    for (double w : l.weights.values()) EXPECT_LE(std::abs(w), bound);
    for (double v : l.bias) EXPECT_EQ(v, 0.0);
  }
  EXPECT_EQ(a.parameter_count(), 7u * 16 + 16 + 16 * 8 + 8 + 8 + 1);
}

class MlpGradientCheck : public ::testing::TestWithParam<std::vector<std::size_t>> {};

TEST_P(MlpGradientCheck, MatchesFiniteDifferences) {
  const MlpArchitecture arch{GetParam()};
  std::mt19937_64 rng(61);
  const auto x = oracle::random_matrix(rng, 12, arch.layer_sizes.front(), 3);
  const auto y = oracle::random_labels(rng, 12);
  for (std::uint64_t point = 0; point < 10; ++point) {
    auto p = init_mlp(arch, 100 + point);
    std::normal_distribution<double> n(0.0, 0.1);
    for (auto& l : p.layers) {
      for (auto& b : l.bias) b = n(rng);
    }
    const auto analytic = flatten(mlp_gradients(p, x, y).gradient);
    const auto numeric = oracle::numeric_gradient(
        [&](const std::vector<double>& q) { return mlp_loss(unflatten(p, q), x, y); }, flatten(p));
    ASSERT_EQ(analytic.size(), numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      EXPECT_LT(oracle::relative_error(analytic[i], numeric[i], 1e-7), 1e-4)
          << "param " << i << " analytic " << analytic[i] << " numeric " << numeric[i];
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Architectures, MlpGradientCheck,
                         ::testing::Values(std::vector<std::size_t>{7, 5, 1}, std::vector<std::size_t>{7, 6, 4, 1},
                                           std::vector<std::size_t>{7, 5, 4, 3, 1}));

TEST(MlpGradients, VanishAtPerfectFit) {
  // Huge output weights on a separable pair drive every residual to zero.
  auto p = make_zero_mlp(MlpArchitecture{{1, 1, 1}});
  p.layers[0].weights(0, 0) = 1.0;
  p.layers[1].weights(0, 0) = 100.0;
  p.layers[1].bias[0] = -50.0;
  const auto x = Matrix::from_rows({{0.0}, {1.0}});
  const Labels y{0, 1};
  for (double g : flatten(mlp_gradients(p, x, y).gradient)) EXPECT_LE(std::abs(g), 1e-10);
}

TEST(MlpGradients, DuplicatedBatchSameMeanGradient) {
  std::mt19937_64 rng(4);
  const auto x = oracle::random_matrix(rng, 10, 7);
  const auto y = oracle::random_labels(rng, 10);
  Matrix doubled(20, 7);
  Labels yy;
  for (std::size_t r = 0; r < 20; ++r) {
    for (std::size_t c = 0; c < 7; ++c) doubled(r, c) = x(r % 10, c);
    yy.push_back(y[r % 10]);
  }
  const auto p = init_mlp(MlpArchitecture{}, 3);
  const auto a = flatten(mlp_gradients(p, x, y).gradient);
  const auto b = flatten(mlp_gradients(p, doubled, yy).gradient);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}

TEST(MlpTrain, SameSeedBitIdentical) {
  const auto& b = benchmark();
  MlpTrainConfig c;
  c.epochs = 5;
  const auto r1 = train_mlp(b.train_x, b.train_y, b.test_x, b.test_y, MlpArchitecture{}, c);
  const auto r2 = train_mlp(b.train_x, b.train_y, b.test_x, b.test_y, MlpArchitecture{}, c);
  EXPECT_EQ(r1.params, r2.params);
  c.seed = 7;
  EXPECT_NE(train_mlp(b.train_x, b.train_y, b.test_x, b.test_y, MlpArchitecture{}, c).params, r1.params);
}

TEST(MlpTrain, TraceLength) {
  const auto& b = benchmark();
  MlpTrainConfig c;
  c.epochs = 1;
  const auto r = train_mlp(b.train_x, b.train_y, b.test_x, b.test_y, MlpArchitecture{}, c);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].epoch, 1);
  EXPECT_TRUE(std::isfinite(r.trace[0].validation_loss));
  c.epochs = 0;
  EXPECT_THROW(train_mlp(b.train_x, b.train_y, b.test_x, b.test_y, MlpArchitecture{}, c), std::invalid_argument);
  c.epochs = 2;
  const auto no_val = train_mlp(b.train_x, b.train_y, Matrix(0, 7), Labels{}, MlpArchitecture{}, c);
  EXPECT_EQ(no_val.trace.size(), 2u);
  EXPECT_TRUE(std::isnan(no_val.trace[1].validation_accuracy));
}

TEST(MlpTrain, RowOrderDoesNotMatter) {
  const auto& b = benchmark();
  std::vector<std::size_t> order(400);
  std::iota(order.begin(), order.end(), 0u);
  const auto x = b.train_x.select_rows(order);
  const auto y = select_labels(b.train_y, order);
  std::reverse(order.begin(), order.end());
  std::rotate(order.begin(), order.begin() + 57, order.end());
  const auto px = b.train_x.select_rows(order);
  const auto py = select_labels(b.train_y, order);
  MlpTrainConfig c;
  c.epochs = 3;
  const auto a = train_mlp(x, y, Matrix(0, 7), Labels{}, MlpArchitecture{}, c);
  const auto p = train_mlp(px, py, Matrix(0, 7), Labels{}, MlpArchitecture{}, c);
  EXPECT_EQ(a.params, p.params);
}

TEST(MlpTrain, MemorizesThirtyTwoPoints) {
  std::mt19937_64 rng(77);
  const auto x = oracle::random_matrix(rng, 32, 7, 2);
  const auto y = oracle::random_labels(rng, 32);
  MlpTrainConfig c;
  c.epochs = 2000;
  c.adam.step = 1e-2;
  const auto r = train_mlp(x, y, Matrix(0, 7), Labels{}, MlpArchitecture{}, c);
  EXPECT_LT(mlp_loss(r.params, x, y), 0.05);
  for (std::size_t i = 0; i < 32; ++i) {
    const double prob = mlp_predict_proba(r.params, x.row(i));
    EXPECT_GT(prob, 0.0);
    EXPECT_LT(prob, 1.0);
  }
}

TEST(MlpTrain, BenchmarkAccuracy) {
  const auto& b = benchmark();
  const auto r = train_mlp(b.train_x, b.train_y, b.test_x, b.test_y, MlpArchitecture{}, MlpTrainConfig{});
  EXPECT_EQ(r.trace.size(), 200u);
  const double acc = r.trace.back().validation_accuracy;
  EXPECT_GE(acc, 0.85);
  EXPECT_LE(acc, 0.92);
}

TEST(MlpArchitectureTest, Validation) {
  EXPECT_THROW((MlpArchitecture{{7, 1}}).validate(), std::invalid_argument);
  EXPECT_THROW((MlpArchitecture{{7, 0, 1}}).validate(), std::invalid_argument);
  EXPECT_THROW((MlpArchitecture{{7, 4, 2}}).validate(), std::invalid_argument);
  EXPECT_NO_THROW(MlpArchitecture{}.validate());
}
