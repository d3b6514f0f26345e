#include "riskml/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "riskml/errors.hpp"
#include "riskml/linear.hpp"
#include "riskml/random.hpp"

namespace riskml {

void MlpArchitecture::validate() const {
  if (layer_sizes.size() < 3) throw std::invalid_argument("MlpArchitecture: need at least one hidden layer");
  for (auto s : layer_sizes) {
    if (s < 1) throw std::invalid_argument("MlpArchitecture: layer sizes must be >= 1");
  }
  if (layer_sizes.back() != 1) throw std::invalid_argument("MlpArchitecture: output layer must have one unit");
}

void MlpTrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("MlpTrainConfig: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("MlpTrainConfig: batch_size must be >= 1");
  if (!(adam.step > 0.0)) throw std::invalid_argument("MlpTrainConfig: step must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw std::invalid_argument("MlpTrainConfig: moment decays must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw std::invalid_argument("MlpTrainConfig: epsilon must be > 0");
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.values().size() + l.bias.size();
  return n;
}

MlpParams MlpParams::zeros_like() const {
  MlpParams z;
  for (const auto& l : layers) {
    z.layers.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size(), 0.0)});
  }
  return z;
}

MlpParams make_zero_mlp(const MlpArchitecture& architecture) {
  architecture.validate();
  MlpParams p;
  const auto& sizes = architecture.layer_sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    p.layers.push_back({Matrix(sizes[l + 1], sizes[l]), std::vector<double>(sizes[l + 1], 0.0)});
  }
  return p;
}

MlpParams init_mlp(const MlpArchitecture& architecture, std::uint64_t seed) {
  MlpParams p = make_zero_mlp(architecture);
  Rng rng = make_rng(seed, stream::kMlpInit);
  for (auto& layer : p.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.cols()));
    for (auto& w : layer.weights.values()) w = (2.0 * uniform_unit(rng) - 1.0) * limit;
  }
  return p;
}

ForwardPass mlp_forward(const MlpParams& params, std::span<const double> x) {
  if (params.layers.empty()) throw std::invalid_argument("mlp_forward: network has no layers");
  if (x.size() != params.input_size()) {
    throw std::invalid_argument("mlp_forward: expected " + std::to_string(params.input_size()) + " inputs, got " +
                                std::to_string(x.size()));
  }
  ForwardPass pass;
  pass.activations.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    const auto& input = pass.activations.back();
    std::vector<double> z(layer.bias);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto w = layer.weights.row(i);
      for (std::size_t j = 0; j < input.size(); ++j) z[i] += w[j] * input[j];
    }
    const bool output = l + 1 == params.layers.size();
    std::vector<double> a(z);
    if (!output) {
      for (auto& v : a) v = std::max(v, 0.0);
    }
    pass.pre_activations.push_back(std::move(z));
    pass.activations.push_back(std::move(a));
  }
  pass.logit = pass.activations.back().front();
  pass.probability = sigmoid(pass.logit);
  return pass;
}

double mlp_predict_proba(const MlpParams& params, std::span<const double> x) { return mlp_forward(params, x).probability; }

double mlp_loss(const MlpParams& params, const Matrix& x, std::span<const int> y) {
  if (x.rows() != y.size()) throw std::invalid_argument("mlp_loss: label count mismatch");
  if (x.empty()) throw std::invalid_argument("mlp_loss: empty batch");
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) loss += logit_cross_entropy(mlp_forward(params, x.row(r)).logit, y[r]);
  return loss / static_cast<double>(x.rows());
}

namespace {

// Accumulates the gradient of one sample's loss, scaled by `scale`, into `grad`.
double accumulate_sample_gradient(const MlpParams& params, std::span<const double> x, int y, double scale,
                                  MlpParams& grad) {
  const auto pass = mlp_forward(params, x);
  std::vector<double> delta{pass.probability - static_cast<double>(y)};  // dL/dlogit
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const auto& layer = params.layers[l];
    auto& g = grad.layers[l];
    const auto& input = pass.activations[l];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      const double d = delta[i] * scale;
      g.bias[i] += d;
      auto row = g.weights.row(i);
      for (std::size_t j = 0; j < input.size(); ++j) row[j] += d * input[j];
    }
    if (l == 0) break;
    std::vector<double> previous(input.size(), 0.0);
    const auto& z_prev = pass.pre_activations[l - 1];
    for (std::size_t j = 0; j < previous.size(); ++j) {
      if (!(z_prev[j] > 0.0)) continue;  // relu'(z) = 0 for z <= 0
      double s = 0.0;
      for (std::size_t i = 0; i < delta.size(); ++i) s += layer.weights(i, j) * delta[i];
      previous[j] = s;
    }
    delta = std::move(previous);
  }
  return logit_cross_entropy(pass.logit, y);
}

double accuracy_and_loss(const MlpParams& params, const Matrix& x, std::span<const int> y, double& accuracy) {
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto pass = mlp_forward(params, x.row(r));
    loss += logit_cross_entropy(pass.logit, y[r]);
    correct += (pass.probability >= 0.5 ? 1 : 0) == y[r] ? 1 : 0;
  }
  accuracy = static_cast<double>(correct) / static_cast<double>(x.rows());
  return loss / static_cast<double>(x.rows());
}

std::vector<std::size_t> canonical_order(const Matrix& x, std::span<const int> y) {
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = x.row(a);
    const auto rb = x.row(b);
    if (std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())) return true;
    if (std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(), ra.end())) return false;
    return y[a] < y[b];
  });
  return order;
}

}  // namespace

MlpGradients mlp_gradients(const MlpParams& params, const Matrix& x, std::span<const int> y) {
  if (x.empty()) throw std::invalid_argument("mlp_gradients: empty batch");
  if (x.rows() != y.size()) throw std::invalid_argument("mlp_gradients: label count mismatch");
  MlpGradients out{0.0, params.zeros_like()};
  const double scale = 1.0 / static_cast<double>(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out.loss += accumulate_sample_gradient(params, x.row(r), y[r], scale, out.gradient);
  }
  out.loss *= scale;
  return out;
}

MlpTrainResult train_mlp(const Matrix& train_x, std::span<const int> train_y, const Matrix& validation_x,
                         std::span<const int> validation_y, const MlpArchitecture& architecture,
                         const MlpTrainConfig& config) {
  architecture.validate();
  config.validate();
  if (train_x.empty()) throw std::invalid_argument("train_mlp: empty training set");
  if (train_x.rows() != train_y.size()) throw std::invalid_argument("train_mlp: label count mismatch");
  if (train_x.cols() != architecture.layer_sizes.front()) {
    throw std::invalid_argument("train_mlp: input width does not match the architecture");
  }
  if (validation_x.rows() != validation_y.size()) throw std::invalid_argument("train_mlp: validation size mismatch");

  const auto canonical = canonical_order(train_x, train_y);
  const Matrix x = train_x.select_rows(canonical);
  const Labels y = select_labels(train_y, canonical);

  MlpTrainResult result{init_mlp(architecture, config.seed), {}};
  MlpParams& params = result.params;
  MlpParams first_moment = params.zeros_like();
  MlpParams second_moment = params.zeros_like();
  Rng shuffle_rng = make_rng(config.seed, stream::kMlpShuffle);

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& adam = config.adam;
  std::uint64_t step_count = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_in_place(order, shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const auto end = std::min(order.size(), start + config.batch_size);
      MlpParams grad = params.zeros_like();
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = start; k < end; ++k) accumulate_sample_gradient(params, x.row(order[k]), y[order[k]], scale, grad);

      ++step_count;
      const double correction1 = 1.0 - std::pow(adam.beta1, static_cast<double>(step_count));
      const double correction2 = 1.0 - std::pow(adam.beta2, static_cast<double>(step_count));
      auto update = [&](double& p, double g, double& m, double& v) {
        m = adam.beta1 * m + (1.0 - adam.beta1) * g;
        v = adam.beta2 * v + (1.0 - adam.beta2) * g * g;
        p -= adam.step * (m / correction1) / (std::sqrt(v / correction2) + adam.epsilon);
      };
      for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto& w = params.layers[l].weights.values();
        const auto& gw = grad.layers[l].weights.values();
        auto& mw = first_moment.layers[l].weights.values();
        auto& vw = second_moment.layers[l].weights.values();
        for (std::size_t i = 0; i < w.size(); ++i) update(w[i], gw[i], mw[i], vw[i]);
        auto& b = params.layers[l].bias;
        for (std::size_t i = 0; i < b.size(); ++i) {
          update(b[i], grad.layers[l].bias[i], first_moment.layers[l].bias[i], second_moment.layers[l].bias[i]);
        }
      }
    }

    EpochRecord record{epoch, 0.0, 0.0, nan, nan};
    record.train_loss = accuracy_and_loss(params, x, y, record.train_accuracy);
    if (!validation_x.empty()) {
      record.validation_loss = accuracy_and_loss(params, validation_x, validation_y, record.validation_accuracy);
    }
    if (!std::isfinite(record.train_loss)) throw NumericError("train_mlp: loss diverged at epoch " + std::to_string(epoch));
    result.trace.push_back(record);
  }
  return result;
}

}  // namespace riskml
