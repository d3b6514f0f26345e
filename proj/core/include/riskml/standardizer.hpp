#pragma once

#include <span>
#include <vector>

#include "riskml/matrix.hpp"

namespace riskml {

/// Per-column z-scoring with statistics from the training data only. Population
/// stddev; a constant column keeps stddev 1 so it maps to all zeros.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> means, std::vector<double> stddevs);

  static Standardizer fit(const Matrix& train);

  Matrix transform(const Matrix& x) const;
  std::vector<double> transform_row(std::span<const double> row) const;
  void transform_row_into(std::span<const double> row, std::span<double> out) const;

  std::size_t dimension() const noexcept { return means_.size(); }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& stddevs() const noexcept { return stddevs_; }

  friend bool operator==(const Standardizer&, const Standardizer&) = default;

 private:
  std::vector<double> means_;
  std::vector<double> stddevs_;
};

}  // namespace riskml
