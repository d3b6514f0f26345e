#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "riskml/dataset.hpp"

namespace riskml {

/// Pearson coefficient with population moments. A constant column yields 0.
double pearson(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kCorrelationSize = kFeatureCount + 1;
using CorrelationMatrix = std::array<std::array<double, kCorrelationSize>, kCorrelationSize>;

/// Correlations over the 7 features plus the label (last row/column). Unit diagonal.
CorrelationMatrix pearson_correlation(const Dataset& dataset);

/// Names for the rows/columns of the correlation matrix.
std::array<std::string, kCorrelationSize> correlation_labels();

/// Per-class distribution summary of one feature, the raw data behind a violin plot.
struct FeatureSummary {
  std::string feature;
  int label = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

std::vector<FeatureSummary> class_summaries(const Dataset& dataset);

/// Header row then one row per variable, labels in the first column.
void write_correlation_csv(const CorrelationMatrix& matrix, std::ostream& out);
/// `feature,label,count,mean,stddev,min,q1,median,q3,max`
void write_summary_csv(std::span<const FeatureSummary> summaries, std::ostream& out);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace riskml
