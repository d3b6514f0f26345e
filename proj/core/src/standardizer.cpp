#include "riskml/standardizer.hpp"

#include <cmath>
#include <stdexcept>

namespace riskml {

Standardizer::Standardizer(std::vector<double> means, std::vector<double> stddevs)
    : means_(std::move(means)), stddevs_(std::move(stddevs)) {
  if (means_.size() != stddevs_.size()) throw std::invalid_argument("Standardizer: size mismatch");
  for (double s : stddevs_) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("Standardizer: stddev must be positive");
  }
}

Standardizer Standardizer::fit(const Matrix& train) {
  if (train.empty()) throw std::invalid_argument("Standardizer::fit: empty training data");
  const auto n = static_cast<double>(train.rows());
  std::vector<double> means(train.cols(), 0.0);
  std::vector<double> stddevs(train.cols(), 0.0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    for (std::size_t c = 0; c < train.cols(); ++c) means[c] += train(r, c);
  }
  for (auto& m : means) m /= n;
  for (std::size_t r = 0; r < train.rows(); ++r) {
    for (std::size_t c = 0; c < train.cols(); ++c) {
      const double d = train(r, c) - means[c];
      stddevs[c] += d * d;
    }
  }
  for (auto& s : stddevs) {
    s = std::sqrt(s / n);
    if (!(s > 0.0)) s = 1.0;
  }
  return Standardizer(std::move(means), std::move(stddevs));
}

void Standardizer::transform_row_into(std::span<const double> row, std::span<double> out) const {
  if (row.size() != means_.size() || out.size() != means_.size()) {
    throw std::invalid_argument("Standardizer: expected " + std::to_string(means_.size()) + " features, got " +
                                std::to_string(row.size()));
  }
  for (std::size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - means_[c]) / stddevs_[c];
}

std::vector<double> Standardizer::transform_row(std::span<const double> row) const {
  std::vector<double> out(row.size());
  transform_row_into(row, out);
  return out;
}

Matrix Standardizer::transform(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) transform_row_into(x.row(r), out.row(r));
  return out;
}

}  // namespace riskml
