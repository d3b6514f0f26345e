#include "riskml/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskml/errors.hpp"
#include "riskml/linear.hpp"

namespace riskml {

void AdaBoostConfig::validate() const {
  if (n_rounds < 0) throw std::invalid_argument("AdaBoostConfig: n_rounds must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("AdaBoostConfig: learning_rate must be > 0");
  if (min_samples_leaf < 1) throw std::invalid_argument("AdaBoostConfig: min_samples_leaf must be >= 1");
}

double adaboost_alpha(double weighted_error) noexcept {
  const double e = std::clamp(weighted_error, kMinWeightedError, kMaxWeightedError);
  return 0.5 * std::log((1.0 - e) / e);
}

int stump_vote(const Tree& stump, std::span<const double> x) { return predict_tree(stump, x) >= 0.5 ? 1 : -1; }

double adaboost_score(const AdaBoostEnsemble& ensemble, std::span<const double> x) {
  double score = 0.0;
  for (std::size_t t = 0; t < ensemble.stumps.size(); ++t) score += ensemble.alphas[t] * stump_vote(ensemble.stumps[t], x);
  return score;
}

int adaboost_class(const AdaBoostEnsemble& ensemble, std::span<const double> x) {
  return adaboost_score(ensemble, x) >= 0.0 ? 1 : 0;
}

double adaboost_predict_proba(const AdaBoostEnsemble& ensemble, std::span<const double> x) {
  return sigmoid(2.0 * adaboost_score(ensemble, x));
}

AdaBoostEnsemble train_adaboost(const Matrix& x, std::span<const int> y, const AdaBoostConfig& config,
                                std::vector<std::vector<double>>* weight_history) {
  config.validate();
  if (x.empty()) throw std::invalid_argument("train_adaboost: empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument("train_adaboost: label count mismatch");

  const auto n = x.rows();
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  const TreeConfig stump_config{1, config.min_samples_leaf, 2};
  AdaBoostEnsemble ensemble;
  if (weight_history) weight_history->clear();

  std::vector<int> votes(n);
  for (int round = 0; round < config.n_rounds; ++round) {
    TreeGrowOptions options;
    options.weights = weights;
    Tree stump = train_decision_tree(x, y, stump_config, options);

    double error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      votes[i] = stump_vote(stump, x.row(i));
      const int truth = y[i] == 1 ? 1 : -1;
      if (votes[i] != truth) error += weights[i];
    }
    if (error >= 0.5) break;

    const double alpha = config.learning_rate * adaboost_alpha(error);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int truth = y[i] == 1 ? 1 : -1;
      weights[i] *= std::exp(-alpha * truth * votes[i]);
      total += weights[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) throw NumericError("train_adaboost: weights degenerated");
    for (auto& w : weights) w /= total;

    ensemble.stumps.push_back(std::move(stump));
    ensemble.alphas.push_back(alpha);
    if (weight_history) weight_history->push_back(weights);
  }
  return ensemble;
}

}  // namespace riskml
