#pragma once

#include <span>
#include <vector>

#include "riskml/matrix.hpp"
#include "riskml/tree.hpp"

namespace riskml {

struct AdaBoostConfig {
  int n_rounds = 50;
  double learning_rate = 1.0;  // multiplies every alpha
  std::size_t min_samples_leaf = 1;

  void validate() const;
};

/// Weighted-error bounds applied before computing alpha.
inline constexpr double kMinWeightedError = 1e-10;
inline constexpr double kMaxWeightedError = 1.0 - 1e-10;

/// 1/2 ln((1 - e) / e) with e clamped to [1e-10, 1 - 1e-10].
double adaboost_alpha(double weighted_error) noexcept;

/// Depth-1 weighted-Gini trees voting -1/+1, combined as sign(sum alpha_t h_t(x)).
struct AdaBoostEnsemble {
  std::vector<Tree> stumps;
  std::vector<double> alphas;

  friend bool operator==(const AdaBoostEnsemble&, const AdaBoostEnsemble&) = default;
};

/// +1 when the stump's leaf holds a (weighted) positive majority, else -1.
int stump_vote(const Tree& stump, std::span<const double> x);

double adaboost_score(const AdaBoostEnsemble& ensemble, std::span<const double> x);
/// sign of the score as a class; a zero score counts as positive.
int adaboost_class(const AdaBoostEnsemble& ensemble, std::span<const double> x);
/// sigmoid(2 * score).
double adaboost_predict_proba(const AdaBoostEnsemble& ensemble, std::span<const double> x);

/// Stops early when a stump's weighted error reaches 0.5. When weight_history is given
/// it receives the normalized sample weights after every round.
AdaBoostEnsemble train_adaboost(const Matrix& x, std::span<const int> y, const AdaBoostConfig& config,
                                std::vector<std::vector<double>>* weight_history = nullptr);

}  // namespace riskml
