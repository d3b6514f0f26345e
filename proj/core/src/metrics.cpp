#include "riskml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskml {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("confusion_matrix: length mismatch");
  if (y_true.empty()) throw std::invalid_argument("confusion_matrix: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool truth = y_true[i] == 1;
    const bool pred = y_pred[i] == 1;
    if (truth && pred) ++cm.tp;
    else if (!truth && pred) ++cm.fp;
    else if (truth && !pred) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricsReport metrics_from_confusion(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.confusion = cm;
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.recall = ratio(cm.tp, cm.tp + cm.fn);
  r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

MetricsReport compute_metrics(std::span<const int> y_true, std::span<const int> y_pred) {
  return metrics_from_confusion(confusion_matrix(y_true, y_pred));
}

double log_loss(std::span<const int> y_true, std::span<const double> probability) {
  if (y_true.size() != probability.size()) throw std::invalid_argument("log_loss: length mismatch");
  if (y_true.empty()) throw std::invalid_argument("log_loss: empty input");
  double loss = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double p = std::clamp(probability[i], 1e-15, 1.0 - 1e-15);
    loss -= y_true[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return loss / static_cast<double>(y_true.size());
}

}  // namespace riskml
