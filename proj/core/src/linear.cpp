#include "riskml/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "riskml/errors.hpp"

namespace riskml {
namespace {

void check_training_data(const Matrix& x, std::span<const int> y, const char* who) {
  if (x.empty()) throw std::invalid_argument(std::string(who) + ": empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument(std::string(who) + ": label count mismatch");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_finite(const LinearModelParams& p, const char* who) {
  bool ok = std::isfinite(p.bias);
  for (double w : p.weights) ok = ok && std::isfinite(w);
  if (!ok) throw NumericError(std::string(who) + ": parameters diverged to non-finite values");
}

}  // namespace

void GdConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("GdConfig: learning_rate must be > 0");
  if (epochs < 1) throw std::invalid_argument("GdConfig: epochs must be >= 1");
  if (!(l2_lambda >= 0.0)) throw std::invalid_argument("GdConfig: l2_lambda must be >= 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("GdConfig: tolerance must be > 0");
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) noexcept { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double logit_cross_entropy(double logit, int y) noexcept {
  // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
  return softplus(logit) - static_cast<double>(y) * logit;
}

double softmax_probability(std::span<const double> logits, std::size_t k) {
  if (k >= logits.size()) throw std::invalid_argument("softmax_probability: class index out of range");
  const double top = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double l : logits) denom += std::exp(l - top);
  return std::exp(logits[k] - top) / denom;
}

double decision_score(const LinearModelParams& params, std::span<const double> x) {
  if (x.size() != params.weights.size()) {
    throw std::invalid_argument("linear model expects " + std::to_string(params.weights.size()) +
                                " features, got " + std::to_string(x.size()));
  }
  return dot(params.weights, x) + params.bias;
}

double logistic_predict_proba(const LinearModelParams& params, std::span<const double> x) {
  if (params.kind != LinearKind::logistic) throw std::invalid_argument("logistic_predict_proba: not a logistic model");
  return sigmoid(decision_score(params, x));
}

double svm_predict_proba(const LinearModelParams& params, std::span<const double> x) {
  if (params.kind != LinearKind::svm) throw std::invalid_argument("svm_predict_proba: not an svm model");
  const PlattScaling platt = params.platt.value_or(PlattScaling{});
  return sigmoid(platt.a * decision_score(params, x) + platt.c);
}

double linear_predict_proba(const LinearModelParams& params, std::span<const double> x) {
  return params.kind == LinearKind::logistic ? logistic_predict_proba(params, x) : svm_predict_proba(params, x);
}

LogisticObjective logistic_objective(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                                     double bias, double l2_lambda) {
  const auto n = static_cast<double>(x.rows());
  LogisticObjective out;
  out.weight_gradient.assign(weights.size(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    const double z = dot(weights, row) + bias;
    out.loss += logit_cross_entropy(z, y[r]);
    const double residual = sigmoid(z) - static_cast<double>(y[r]);
    for (std::size_t j = 0; j < weights.size(); ++j) out.weight_gradient[j] += residual * row[j];
    out.bias_gradient += residual;
  }
  out.loss /= n;
  out.bias_gradient /= n;
  double penalty = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    out.weight_gradient[j] = out.weight_gradient[j] / n + l2_lambda * weights[j];
    penalty += weights[j] * weights[j];
  }
  out.loss += 0.5 * l2_lambda * penalty;
  return out;
}

double hinge_objective(const Matrix& x, std::span<const int> y, std::span<const double> weights, double bias,
                       double l2_lambda) {
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double sign = y[r] == 1 ? 1.0 : -1.0;
    loss += std::max(0.0, 1.0 - sign * (dot(weights, x.row(r)) + bias));
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return loss / static_cast<double>(x.rows()) + 0.5 * l2_lambda * penalty;
}

LinearModelParams train_logistic(const Matrix& x, std::span<const int> y, const GdConfig& config,
                                 std::vector<double>* loss_history) {
  config.validate();
  check_training_data(x, y, "train_logistic");
  LinearModelParams params{LinearKind::logistic, std::vector<double>(x.cols(), 0.0), 0.0, std::nullopt};

  auto objective = logistic_objective(x, y, params.weights, params.bias, config.l2_lambda);
  if (loss_history) loss_history->assign(1, objective.loss);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t j = 0; j < params.weights.size(); ++j) {
      params.weights[j] -= config.learning_rate * objective.weight_gradient[j];
    }
    if (config.fit_intercept) params.bias -= config.learning_rate * objective.bias_gradient;
    const double previous = objective.loss;
    objective = logistic_objective(x, y, params.weights, params.bias, config.l2_lambda);
    if (loss_history) loss_history->push_back(objective.loss);
    if (!std::isfinite(objective.loss)) throw NumericError("train_logistic: loss diverged");
    if (previous - objective.loss < config.tolerance) break;
  }
  check_finite(params, "train_logistic");
  return params;
}

PlattScaling fit_platt(std::span<const double> margins, std::span<const int> y) {
  if (margins.size() != y.size() || margins.empty()) throw std::invalid_argument("fit_platt: bad input sizes");
  double positives = 0.0;
  for (int label : y) positives += label;
  const double negatives = static_cast<double>(y.size()) - positives;
  const double hi_target = (positives + 1.0) / (positives + 2.0);
  const double lo_target = 1.0 / (negatives + 2.0);

  // Newton iterations on the 2-parameter cross-entropy with a backtracking line search.
  PlattScaling p{1.0, 0.0};
  auto loss_at = [&](double a, double c) {
    double loss = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double t = y[i] == 1 ? hi_target : lo_target;
      const double z = a * margins[i] + c;
      loss += softplus(z) - t * z;
    }
    return loss;
  };
  double loss = loss_at(p.a, p.c);
  for (int iter = 0; iter < 100; ++iter) {
    double ga = 0.0, gc = 0.0, haa = 0.0, hac = 0.0, hcc = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double t = y[i] == 1 ? hi_target : lo_target;
      const double s = sigmoid(p.a * margins[i] + p.c);
      const double d = s - t;
      const double w = std::max(s * (1.0 - s), 1e-12);
      ga += d * margins[i];
      gc += d;
      haa += w * margins[i] * margins[i];
      hac += w * margins[i];
      hcc += w;
    }
    haa += 1e-12;
    hcc += 1e-12;
    const double det = haa * hcc - hac * hac;
    if (!(std::abs(det) > 0.0)) break;
    const double step_a = (hcc * ga - hac * gc) / det;
    const double step_c = (haa * gc - hac * ga) / det;
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, scale *= 0.5) {
      const double na = p.a - scale * step_a;
      const double nc = p.c - scale * step_c;
      const double nl = loss_at(na, nc);
      if (nl <= loss) {
        p = {na, nc};
        improved = loss - nl > 1e-14 * std::max(1.0, std::abs(loss));
        loss = nl;
        break;
      }
    }
    if (!improved) break;
  }
  if (!std::isfinite(p.a) || !std::isfinite(p.c)) throw NumericError("fit_platt: calibration diverged");
  return p;
}

LinearModelParams train_linear_svm(const Matrix& x, std::span<const int> y, const GdConfig& config) {
  config.validate();
  check_training_data(x, y, "train_linear_svm");
  LinearModelParams params{LinearKind::svm, std::vector<double>(x.cols(), 0.0), 0.0, std::nullopt};
  const auto n = static_cast<double>(x.rows());

  // The hinge subgradient does not decrease monotonically, so every epoch runs.
  std::vector<double> grad(x.cols());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto row = x.row(r);
      const double sign = y[r] == 1 ? 1.0 : -1.0;
      if (sign * (dot(params.weights, row) + params.bias) < 1.0) {
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] -= sign * row[j];
        grad_b -= sign;
      }
    }
    const double step = config.learning_rate / std::sqrt(static_cast<double>(epoch) + 1.0);
    for (std::size_t j = 0; j < grad.size(); ++j) {
      params.weights[j] -= step * (grad[j] / n + config.l2_lambda * params.weights[j]);
    }
    if (config.fit_intercept) params.bias -= step * grad_b / n;
  }
  check_finite(params, "train_linear_svm");

  std::vector<double> margins;
  margins.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) margins.push_back(decision_score(params, x.row(r)));
  params.platt = fit_platt(margins, y);
  return params;
}

}  // namespace riskml
