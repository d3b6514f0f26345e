#include "riskml/dataset.hpp"

#include <stdexcept>
#include <string>

#include "riskml/errors.hpp"

namespace riskml {

FeatureVector PatientRecord::features() const {
  return {age,
          body_temperature,
          static_cast<double>(fatigue),
          static_cast<double>(cough),
          static_cast<double>(body_pain),
          static_cast<double>(sore_throat),
          static_cast<double>(breathing_difficulty)};
}

PatientRecord PatientRecord::from_features(std::span<const double> features, std::optional<int> label) {
  if (features.size() != kFeatureCount) {
    throw std::invalid_argument("PatientRecord::from_features: expected 7 features, got " +
                                std::to_string(features.size()));
  }
  auto as_flag = [&](std::size_t column) {
    const double v = features[column];
    if (v != 0.0 && v != 1.0) {
      throw DataError(std::string(kFeatureNames[column]) + " must be 0 or 1, got " + std::to_string(v));
    }
    return static_cast<int>(v);
  };
  PatientRecord r;
  r.age = features[0];
  r.body_temperature = features[1];
  r.fatigue = as_flag(2);
  r.cough = as_flag(3);
  r.body_pain = as_flag(4);
  r.sore_throat = as_flag(5);
  r.breathing_difficulty = as_flag(6);
  r.infected = label;
  return r;
}

void validate_record(const PatientRecord& record) {
  if (!(record.age >= kMinAge && record.age <= kMaxAge)) {
    throw DataError("age out of range [0, 120]: " + std::to_string(record.age));
  }
  if (!(record.body_temperature >= kMinTemperature && record.body_temperature <= kMaxTemperature)) {
    throw DataError("body_temperature out of range [90, 110]: " + std::to_string(record.body_temperature));
  }
  const std::array<int, kSymptomCount> flags{record.fatigue, record.cough, record.body_pain, record.sore_throat,
                                             record.breathing_difficulty};
  for (std::size_t s = 0; s < kSymptomCount; ++s) {
    if (flags[s] != 0 && flags[s] != 1) {
      throw DataError(std::string(kFeatureNames[kFirstSymptomColumn + s]) + " must be 0 or 1, got " +
                      std::to_string(flags[s]));
    }
  }
  if (record.infected && *record.infected != 0 && *record.infected != 1) {
    throw DataError("infected must be 0 or 1, got " + std::to_string(*record.infected));
  }
}

Dataset::Dataset(std::vector<PatientRecord> records) : records_(std::move(records)) {
  if (records_.empty()) return;
  labeled_ = records_.front().infected.has_value();
  for (const auto& r : records_) {
    validate_record(r);
    if (r.infected.has_value() != labeled_) {
      throw DataError("dataset mixes labeled and unlabeled records");
    }
  }
}

Matrix Dataset::features() const {
  Matrix m(records_.size(), kFeatureCount);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto f = records_[i].features();
    std::copy(f.begin(), f.end(), m.row(i).begin());
  }
  return m;
}

Labels Dataset::labels() const {
  if (!records_.empty() && !labeled_) throw DataError("dataset is unlabeled");
  Labels y;
  y.reserve(records_.size());
  for (const auto& r : records_) y.push_back(*r.infected);
  return y;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<PatientRecord> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(records_.at(i));
  Dataset d;
  d.records_ = std::move(out);
  d.labeled_ = !d.records_.empty() && labeled_;
  return d;
}

void require_labeled(const Dataset& dataset, std::string_view operation) {
  if (dataset.empty()) throw std::invalid_argument(std::string(operation) + ": dataset is empty");
  if (!dataset.labeled()) throw std::invalid_argument(std::string(operation) + ": dataset is unlabeled");
}

}  // namespace riskml
