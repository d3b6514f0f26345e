#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "riskml/gbt.hpp"
#include "riskml/matrix.hpp"

namespace riskml {

struct CategoryStatistics {
  double positives = 0.0;
  double count = 0.0;
  friend bool operator==(const CategoryStatistics&, const CategoryStatistics&) = default;
};

/// Ordered target statistics for one categorical column. During fitting, record i is
/// encoded from the records that precede it in the permutation only:
///   (positives_before + a * global_rate) / (count_before + a).
/// After fitting, encode() uses the statistics of the whole training column.
class OrderedTargetEncoder {
 public:
  OrderedTargetEncoder() = default;
  OrderedTargetEncoder(double prior_weight, double global_rate, std::map<double, CategoryStatistics> statistics,
                       std::vector<std::size_t> permutation);

  /// Returns the leakage-free training encodings and stores the full statistics.
  /// Throws std::invalid_argument if `permutation` is not a bijection on the rows.
  std::vector<double> fit_transform(std::span<const double> column, std::span<const int> labels,
                                    std::span<const std::size_t> permutation, double prior_weight);

  double encode(double category) const;

  double prior_weight() const noexcept { return prior_weight_; }
  double global_rate() const noexcept { return global_rate_; }
  const std::map<double, CategoryStatistics>& statistics() const noexcept { return statistics_; }
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

  friend bool operator==(const OrderedTargetEncoder&, const OrderedTargetEncoder&) = default;

 private:
  double prior_weight_ = 1.0;
  double global_rate_ = 0.5;
  std::map<double, CategoryStatistics> statistics_;
  std::vector<std::size_t> permutation_;
};

std::vector<double> ordered_target_encode(std::span<const double> column, std::span<const int> labels,
                                          std::span<const std::size_t> permutation, double prior_weight);

/// Ordered target statistics on the categorical columns followed by ordinary gradient
/// boosting on the encoded matrix. The binary symptoms are treated as categories.
struct CatBoostConfig {
  GbtConfig gbt{};
  double prior_weight = 1.0;
  std::vector<std::size_t> categorical_columns{2, 3, 4, 5, 6};

  void validate(std::size_t feature_count) const;
};

struct CatBoostModel {
  std::vector<std::size_t> categorical_columns;
  std::vector<OrderedTargetEncoder> encoders;  // parallel to categorical_columns
  GbtEnsemble ensemble;

  friend bool operator==(const CatBoostModel&, const CatBoostModel&) = default;
};

/// The permutation is drawn from stream (config.gbt.seed, kOrderedPermutation).
CatBoostModel train_catboost(const Matrix& x, std::span<const int> y, const CatBoostConfig& config);
std::vector<double> catboost_encode_row(const CatBoostModel& model, std::span<const double> x);
double catboost_predict_proba(const CatBoostModel& model, std::span<const double> x);

}  // namespace riskml
