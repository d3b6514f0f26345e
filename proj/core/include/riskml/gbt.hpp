#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "riskml/matrix.hpp"
#include "riskml/tree.hpp"

namespace riskml {

enum class TreeGrowth { depth_wise, leaf_wise };

struct GbtConfig {
  int n_rounds = 100;
  double learning_rate = 0.1;     // shrinkage applied to every tree
  double min_child_weight = 1.0;  // minimum hessian sum per child
  double l2_lambda = 1.0;
  double gamma = 0.0;             // per-split gain penalty
  TreeGrowth growth = TreeGrowth::depth_wise;
  int max_depth = 3;   // depth_wise
  int max_leaves = 8;  // leaf_wise
  std::uint64_t seed = 42;

  void validate() const;
};

struct GradHess {
  double gradient = 0.0;
  double hessian = 0.0;
};

inline constexpr double kMinHessian = 1e-16;

/// First and second derivative of the logistic log-loss with respect to the margin.
GradHess logistic_grad_hess(int y, double margin) noexcept;

/// Second-order split gain 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l)] - gamma.
double gbt_split_gain(double g_left, double h_left, double g_right, double h_right, double l2_lambda,
                      double gamma) noexcept;

/// A split is kept only with positive gain and both children at or above min_child_weight.
bool gbt_split_accepted(double gain, double h_left, double h_right, double min_child_weight) noexcept;

/// -G / (H + lambda), the minimizer of G w + (H + lambda) w^2 / 2.
double gbt_leaf_value(double g_sum, double h_sum, double l2_lambda) noexcept;

/// Row order of every column, ascending by value with ties by row index. Built once per
/// training run and reused by every boosting round.
class PresortedColumns {
 public:
  explicit PresortedColumns(const Matrix& x);
  std::span<const std::uint32_t> order(std::size_t column) const { return orders_[column]; }
  std::size_t columns() const noexcept { return orders_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> orders_;
};

/// Fits one regression tree to per-row gradient statistics. Leaves hold gbt_leaf_value.
Tree fit_gradient_tree(const Matrix& x, const PresortedColumns& presorted, std::span<const GradHess> stats,
                       const GbtConfig& config);
Tree fit_gradient_tree(const Matrix& x, std::span<const GradHess> stats, const GbtConfig& config);

struct GbtEnsemble {
  double base_score = 0.0;  // log-odds of the training positive rate
  double learning_rate = 0.1;
  std::vector<Tree> trees;

  friend bool operator==(const GbtEnsemble&, const GbtEnsemble&) = default;
};

/// base_score + learning_rate * sum of tree outputs.
double gbt_margin(const GbtEnsemble& ensemble, std::span<const double> x);
double gbt_predict_proba(const GbtEnsemble& ensemble, std::span<const double> x);

/// When log_loss_history is given it receives the mean training log-loss before the
/// first round and after each round.
GbtEnsemble train_gbt(const Matrix& x, std::span<const int> y, const GbtConfig& config,
                      std::vector<double>* log_loss_history = nullptr);

}  // namespace riskml
