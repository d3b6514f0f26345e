#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "riskml/matrix.hpp"

namespace riskml {

enum class LinearKind { logistic, svm };

/// Maps an SVM margin m to sigmoid(a * m + c).
struct PlattScaling {
  double a = 1.0;
  double c = 0.0;
};

struct LinearModelParams {
  LinearKind kind = LinearKind::logistic;
  std::vector<double> weights;  // standardized-feature space
  double bias = 0.0;
  std::optional<PlattScaling> platt;  // set for svm
};

struct GdConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2_lambda = 1e-3;
  double tolerance = 1e-8;
  bool fit_intercept = true;
  std::uint64_t seed = 42;  // unused: zero initialization makes training seed-free

  void validate() const;
};

/// Numerically stable logistic function.
double sigmoid(double z) noexcept;
/// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept;
/// Binary cross-entropy of a logit against label y in {0, 1}.
double logit_cross_entropy(double logit, int y) noexcept;

/// Probability of class k under softmax over the given logits (log-sum-exp stabilized).
double softmax_probability(std::span<const double> logits, std::size_t k);

/// w.x + b; throws std::invalid_argument on dimension mismatch.
double decision_score(const LinearModelParams& params, std::span<const double> x);

double logistic_predict_proba(const LinearModelParams& params, std::span<const double> x);
double svm_predict_proba(const LinearModelParams& params, std::span<const double> x);
/// Dispatches on params.kind.
double linear_predict_proba(const LinearModelParams& params, std::span<const double> x);

struct LogisticObjective {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

/// Mean binary cross-entropy + (l2/2)|w|^2 and its gradient.
LogisticObjective logistic_objective(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                                     double bias, double l2_lambda);

/// Mean hinge loss (labels mapped to -1/+1) + (l2/2)|w|^2.
double hinge_objective(const Matrix& x, std::span<const int> y, std::span<const double> weights, double bias,
                       double l2_lambda);

/// Full-batch gradient descent from zero. When loss_history is given it receives the
/// objective before the first step and after every epoch.
LinearModelParams train_logistic(const Matrix& x, std::span<const int> y, const GdConfig& config,
                                 std::vector<double>* loss_history = nullptr);

/// Subgradient descent on the hinge objective with step learning_rate / sqrt(epoch + 1),
/// followed by Platt calibration of the margins.
LinearModelParams train_linear_svm(const Matrix& x, std::span<const int> y, const GdConfig& config);

/// Fits sigmoid(a * margin + c) to labels by Newton's method with Platt's smoothed targets.
PlattScaling fit_platt(std::span<const double> margins, std::span<const int> y);

}  // namespace riskml
