#include "riskml/ordered_encoding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "riskml/random.hpp"

namespace riskml {

OrderedTargetEncoder::OrderedTargetEncoder(double prior_weight, double global_rate,
                                           std::map<double, CategoryStatistics> statistics,
                                           std::vector<std::size_t> permutation)
    : prior_weight_(prior_weight),
      global_rate_(global_rate),
      statistics_(std::move(statistics)),
      permutation_(std::move(permutation)) {}

std::vector<double> OrderedTargetEncoder::fit_transform(std::span<const double> column, std::span<const int> labels,
                                                        std::span<const std::size_t> permutation,
                                                        double prior_weight) {
  const auto n = column.size();
  if (labels.size() != n) throw std::invalid_argument("ordered_target_encode: label count mismatch");
  if (n == 0) throw std::invalid_argument("ordered_target_encode: empty column");
  if (!(prior_weight > 0.0)) throw std::invalid_argument("ordered_target_encode: prior weight must be > 0");
  if (permutation.size() != n) throw std::invalid_argument("ordered_target_encode: permutation is not a bijection");
  std::vector<char> hit(n, 0);
  for (auto p : permutation) {
    if (p >= n || hit[p]) throw std::invalid_argument("ordered_target_encode: permutation is not a bijection");
    hit[p] = 1;
  }

  prior_weight_ = prior_weight;
  global_rate_ = static_cast<double>(std::accumulate(labels.begin(), labels.end(), 0)) / static_cast<double>(n);
  statistics_.clear();
  permutation_.assign(permutation.begin(), permutation.end());

  std::vector<double> encoded(n);
  for (auto row : permutation) {
    auto& stats = statistics_[column[row]];
    encoded[row] = stats.count == 0.0 ? global_rate_
                                      : (stats.positives + prior_weight_ * global_rate_) / (stats.count + prior_weight_);
    stats.positives += labels[row];
    stats.count += 1.0;
  }
  return encoded;
}

double OrderedTargetEncoder::encode(double category) const {
  const auto it = statistics_.find(category);
  if (it == statistics_.end() || it->second.count == 0.0) return global_rate_;
  return (it->second.positives + prior_weight_ * global_rate_) / (it->second.count + prior_weight_);
}

std::vector<double> ordered_target_encode(std::span<const double> column, std::span<const int> labels,
                                          std::span<const std::size_t> permutation, double prior_weight) {
  OrderedTargetEncoder encoder;
  return encoder.fit_transform(column, labels, permutation, prior_weight);
}

void CatBoostConfig::validate(std::size_t feature_count) const {
  gbt.validate();
  if (!(prior_weight > 0.0)) throw std::invalid_argument("CatBoostConfig: prior_weight must be > 0");
  for (auto c : categorical_columns) {
    if (c >= feature_count) throw std::invalid_argument("CatBoostConfig: categorical column out of range");
  }
}

CatBoostModel train_catboost(const Matrix& x, std::span<const int> y, const CatBoostConfig& config) {
  if (x.empty()) throw std::invalid_argument("train_catboost: empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument("train_catboost: label count mismatch");
  config.validate(x.cols());

  std::vector<std::size_t> permutation(x.rows());
  std::iota(permutation.begin(), permutation.end(), std::size_t{0});
  Rng rng = make_rng(config.gbt.seed, stream::kOrderedPermutation);
  shuffle_in_place(permutation, rng);

  CatBoostModel model;
  model.categorical_columns = config.categorical_columns;
  Matrix encoded = x;
  std::vector<double> column(x.rows());
  for (auto c : config.categorical_columns) {
    for (std::size_t r = 0; r < x.rows(); ++r) column[r] = x(r, c);
    OrderedTargetEncoder encoder;
    const auto values = encoder.fit_transform(column, y, permutation, config.prior_weight);
    for (std::size_t r = 0; r < x.rows(); ++r) encoded(r, c) = values[r];
    model.encoders.push_back(std::move(encoder));
  }
  model.ensemble = train_gbt(encoded, y, config.gbt);
  return model;
}

std::vector<double> catboost_encode_row(const CatBoostModel& model, std::span<const double> x) {
  std::vector<double> row(x.begin(), x.end());
  for (std::size_t i = 0; i < model.categorical_columns.size(); ++i) {
    const auto c = model.categorical_columns[i];
    if (c >= row.size()) throw std::invalid_argument("catboost: categorical column out of range");
    row[c] = model.encoders[i].encode(x[c]);
  }
  return row;
}

double catboost_predict_proba(const CatBoostModel& model, std::span<const double> x) {
  return gbt_predict_proba(model.ensemble, catboost_encode_row(model, x));
}

}  // namespace riskml
