#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "riskml/matrix.hpp"

namespace riskml {

/// Fully connected network: relu hidden layers, one sigmoid output unit.
struct MlpArchitecture {
  std::vector<std::size_t> layer_sizes{7, 16, 8, 1};

  void validate() const;
};

/// a = f(W x + b); weights is (outputs x inputs).
struct DenseLayer {
  Matrix weights;
  std::vector<double> bias;
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  std::size_t input_size() const { return layers.empty() ? 0 : layers.front().weights.cols(); }
  std::size_t parameter_count() const;
  /// Zero-valued parameters with the same shapes.
  MlpParams zeros_like() const;
  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

struct AdamConfig {
  double step = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct MlpTrainConfig {
  int epochs = 200;
  std::size_t batch_size = 32;
  AdamConfig adam{};
  std::uint64_t seed = 42;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_loss = 0.0;
  double validation_accuracy = 0.0;
};

/// One entry per completed epoch. Validation fields are NaN when no validation set is given.
using TrainingTrace = std::vector<EpochRecord>;

struct ForwardPass {
  double probability = 0.5;
  double logit = 0.0;
  /// activations[0] is the input, activations[l + 1] the output of layer l (the last
  /// entry holds the output logit, before the sigmoid).
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre_activations;
};

/// Zero weights and biases with the given shapes.
MlpParams make_zero_mlp(const MlpArchitecture& architecture);
/// Uniform He initialization U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), zero biases.
MlpParams init_mlp(const MlpArchitecture& architecture, std::uint64_t seed);

ForwardPass mlp_forward(const MlpParams& params, std::span<const double> x);
double mlp_predict_proba(const MlpParams& params, std::span<const double> x);

/// Mean binary cross-entropy over the rows, computed from the output logit.
double mlp_loss(const MlpParams& params, const Matrix& x, std::span<const int> y);

struct MlpGradients {
  double loss = 0.0;
  MlpParams gradient;  // same shapes as the parameters
};

/// Reverse-mode gradient of the mean cross-entropy over the batch rows.
MlpGradients mlp_gradients(const MlpParams& params, const Matrix& x, std::span<const int> y);

struct MlpTrainResult {
  MlpParams params;
  TrainingTrace trace;
};

/// Adam on shuffled mini-batches. Rows are first put in a canonical (lexicographic)
/// order, so the result depends only on the data content and the seed.
/// `validation_x` may be empty.
MlpTrainResult train_mlp(const Matrix& train_x, std::span<const int> train_y, const Matrix& validation_x,
                         std::span<const int> validation_y, const MlpArchitecture& architecture,
                         const MlpTrainConfig& config);

}  // namespace riskml
