#pragma once

#include <cstddef>
#include <span>

namespace riskml {

/// Counts for the positive class (infected = 1).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Every 0/0 ratio is reported as 0.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  ConfusionMatrix confusion;
};

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);
MetricsReport metrics_from_confusion(const ConfusionMatrix& cm);
/// Throws std::invalid_argument on empty or unequal-length input.
MetricsReport compute_metrics(std::span<const int> y_true, std::span<const int> y_pred);

/// Mean cross-entropy of probabilities, clipped to [1e-15, 1 - 1e-15].
double log_loss(std::span<const int> y_true, std::span<const double> probability);

}  // namespace riskml
