#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskml/dataset.hpp"
#include "riskml/metrics.hpp"
#include "riskml/model.hpp"
#include "riskml/split.hpp"

namespace riskml {

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

/// Mean and stddev are taken over the per-fold metrics, not over pooled predictions.
struct CvReport {
  FoldAssignment assignment;
  std::vector<MetricsReport> folds;
  MetricSummary accuracy;
  MetricSummary precision;
  MetricSummary recall;
  MetricSummary f1;
  std::vector<double> out_of_fold_probability;  // per record
  std::vector<std::size_t> evaluation_count;    // per record; 1 everywhere after a full run
};

using ModelFactory =
    std::function<std::unique_ptr<Model>(const Matrix& features, std::span<const int> labels, std::uint64_t seed)>;

/// Fold f trains on the other k-1 folds with seed derive_seed(seed, kFoldModelBase + f).
CvReport cross_validate(const ModelFactory& factory, const Dataset& dataset, std::size_t k, std::uint64_t seed);
CvReport cross_validate(const ModelSpec& spec, const Dataset& dataset, std::size_t k, std::uint64_t seed);

MetricSummary summarize(std::span<const double> values);

struct SweepGrid {
  std::vector<double> learning_rates{0.01, 0.05, 0.1, 0.3};
  std::vector<double> min_child_weights{1.0, 5.0, 10.0, 20.0};
};

struct SweepCell {
  double learning_rate = 0.0;
  double min_child_weight = 0.0;
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  double train_log_loss = 0.0;
  double validation_log_loss = 0.0;

  double gap() const noexcept { return train_accuracy - validation_accuracy; }
};

/// How the two sweep axes reach a family's own settings.
///  - learning rate: GD step (logistic, svm), Adam step (mlp), shrinkage (gbt, catboost),
///    alpha multiplier (adaboost); no effect on tree, forest and knn.
///  - min child weight: hessian floor (gbt, catboost), min_samples_leaf = max(1, ceil(c))
///    (tree, forest, adaboost); no effect on logistic, svm, mlp and knn.
struct AxisMapping {
  bool learning_rate = false;
  bool min_child_weight = false;
};

AxisMapping sweep_axis_mapping(ModelKind kind);
/// Throws std::invalid_argument for the voting ensemble.
Hyperparameters apply_sweep_axes(ModelKind kind, Hyperparameters hp, double learning_rate, double min_child_weight);

struct SweepResult {
  ModelKind family = ModelKind::gbt_depthwise;
  SweepGrid grid;
  AxisMapping mapping;
  std::vector<SweepCell> cells;  // learning-rate major, in grid order

  const SweepCell& at(std::size_t lr_index, std::size_t mcw_index) const {
    return cells.at(lr_index * grid.min_child_weights.size() + mcw_index);
  }
  /// Mean train-validation accuracy gap over the learning rates for one min_child_weight.
  double mean_gap_at_min_child_weight(std::size_t mcw_index) const;
};

/// Every cell trains on identical data with the same seed.
SweepResult overfit_sweep(const ModelSpec& base, const Dataset& train, const Dataset& validation,
                          const SweepGrid& grid, std::uint64_t seed);

struct ComparisonRow {
  ModelKind kind = ModelKind::logistic;
  std::optional<MetricsReport> metrics;  // empty when training or evaluation failed
  std::string error;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // successful rows by descending accuracy, then failures
  std::vector<ModelPtr> models;     // trained models, parallel to rows (null for failures)
};

/// Trains every requested family on `train` and scores it on `test`. The voting row
/// averages the other successfully trained families when they are present.
ComparisonTable compare_models(std::span<const ModelKind> kinds, const Hyperparameters& hp, const Dataset& train,
                               const Dataset& test, std::uint64_t seed);

void write_comparison_csv(const ComparisonTable& table, std::ostream& out);
void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_trace_csv(const TrainingTrace& trace, std::ostream& out);

}  // namespace riskml
