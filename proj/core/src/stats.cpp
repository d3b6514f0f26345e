#include "riskml/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "riskml/csv.hpp"

namespace riskml {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two observations");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::array<std::string, kCorrelationSize> correlation_labels() {
  std::array<std::string, kCorrelationSize> names;
  for (std::size_t j = 0; j < kFeatureCount; ++j) names[j] = std::string(kFeatureNames[j]);
  names[kFeatureCount] = std::string(kLabelName);
  return names;
}

CorrelationMatrix pearson_correlation(const Dataset& dataset) {
  if (!dataset.labeled()) throw std::invalid_argument("pearson_correlation: dataset must be labeled");
  if (dataset.size() < 2) throw std::invalid_argument("pearson_correlation: need at least two records");

  std::array<std::vector<double>, kCorrelationSize> columns;
  for (auto& c : columns) c.reserve(dataset.size());
  for (const auto& r : dataset.records()) {
    const auto f = r.features();
    for (std::size_t j = 0; j < kFeatureCount; ++j) columns[j].push_back(f[j]);
    columns[kFeatureCount].push_back(static_cast<double>(*r.infected));
  }

  CorrelationMatrix m{};
  for (std::size_t i = 0; i < kCorrelationSize; ++i) {
    m[i][i] = 1.0;
    for (std::size_t j = i + 1; j < kCorrelationSize; ++j) {
      m[i][j] = m[j][i] = pearson(columns[i], columns[j]);
    }
  }
  return m;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty input");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<FeatureSummary> class_summaries(const Dataset& dataset) {
  if (!dataset.labeled()) throw std::invalid_argument("class_summaries: dataset must be labeled");
  std::vector<FeatureSummary> out;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    for (int label = 0; label <= 1; ++label) {
      std::vector<double> values;
      for (const auto& r : dataset.records()) {
        if (*r.infected == label) values.push_back(r.features()[j]);
      }
      FeatureSummary s;
      s.feature = std::string(kFeatureNames[j]);
      s.label = label;
      s.count = values.size();
      if (!values.empty()) {
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
        s.min = values.front();
        s.q1 = quantile_sorted(values, 0.25);
        s.median = quantile_sorted(values, 0.5);
        s.q3 = quantile_sorted(values, 0.75);
        s.max = values.back();
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_correlation_csv(const CorrelationMatrix& matrix, std::ostream& out) {
  const auto labels = correlation_labels();
  out << "variable";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < kCorrelationSize; ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < kCorrelationSize; ++j) out << ',' << format_double(matrix[i][j]);
    out << '\n';
  }
}

void write_summary_csv(std::span<const FeatureSummary> summaries, std::ostream& out) {
  out << "feature,label,count,mean,stddev,min,q1,median,q3,max\n";
  for (const auto& s : summaries) {
    out << s.feature << ',' << s.label << ',' << s.count << ',' << format_double(s.mean) << ','
        << format_double(s.stddev) << ',' << format_double(s.min) << ',' << format_double(s.q1) << ','
        << format_double(s.median) << ',' << format_double(s.q3) << ',' << format_double(s.max) << '\n';
  }
}

}  // namespace riskml
