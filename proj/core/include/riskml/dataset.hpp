#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "riskml/matrix.hpp"

namespace riskml {

inline constexpr std::size_t kFeatureCount = 7;
inline constexpr std::size_t kSymptomCount = 5;

/// Canonical feature order used by every matrix, model and file.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "age", "body_temperature", "fatigue", "cough", "body_pain", "sore_throat", "breathing_difficulty"};
inline constexpr std::string_view kLabelName = "infected";

/// Column index of the first binary symptom in the feature vector.
inline constexpr std::size_t kFirstSymptomColumn = 2;

inline constexpr double kMinAge = 0.0;
inline constexpr double kMaxAge = 120.0;
inline constexpr double kMinTemperature = 90.0;
inline constexpr double kMaxTemperature = 110.0;

using FeatureVector = std::array<double, kFeatureCount>;

struct PatientRecord {
  double age = 0.0;               // years
  double body_temperature = 0.0;  // degrees Fahrenheit
  int fatigue = 0;
  int cough = 0;
  int body_pain = 0;
  int sore_throat = 0;
  int breathing_difficulty = 0;
  std::optional<int> infected;

  FeatureVector features() const;
  static PatientRecord from_features(std::span<const double> features, std::optional<int> label = {});

  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

/// Throws DataError naming the offending field when a record violates its ranges.
void validate_record(const PatientRecord& record);

/// Ordered collection of records; either every record is labeled or none is.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<PatientRecord> records);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  bool labeled() const noexcept { return labeled_; }

  const std::vector<PatientRecord>& records() const noexcept { return records_; }
  const PatientRecord& operator[](std::size_t i) const { return records_[i]; }

  /// n x 7 feature matrix in canonical order.
  Matrix features() const;
  /// Labels; throws DataError for an unlabeled dataset with records.
  Labels labels() const;

  Dataset subset(std::span<const std::size_t> indices) const;

  static constexpr std::span<const std::string_view> feature_names() { return kFeatureNames; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<PatientRecord> records_;
  bool labeled_ = false;
};

/// Throws std::invalid_argument unless the dataset is non-empty and labeled.
void require_labeled(const Dataset& dataset, std::string_view operation);

}  // namespace riskml
