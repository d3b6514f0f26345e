#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "riskml/dataset.hpp"

namespace riskml {

struct NormalParams {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Generative model for synthetic patients. Labels are drawn first, then each
/// feature independently given the label. Age and temperature are normal
/// distributions truncated to the record's valid ranges.
///
/// The defaults are calibrated so that corr(age, infected) is about 0.36 and the
/// Bayes-optimal classifier reaches about 90% accuracy.
struct GeneratorConfig {
  std::size_t n = 4000;
  double class_balance = 0.5;  // P(infected)
  NormalParams age_healthy{41.0, 14.0};
  NormalParams age_infected{51.8, 14.0};
  NormalParams temperature_healthy{98.8, 0.9};
  NormalParams temperature_infected{100.8, 1.3};
  /// P(symptom = 1 | infected), in canonical symptom order.
  std::array<double, kSymptomCount> symptom_given_infected{0.70, 0.60, 0.55, 0.50, 0.40};
  /// P(symptom = 1 | healthy).
  std::array<double, kSymptomCount> symptom_given_healthy{0.30, 0.25, 0.20, 0.25, 0.10};
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument for probabilities outside [0, 1] or non-positive stddevs.
  void validate() const;
};

struct SyntheticSample {
  Dataset dataset;
  /// Exact posterior P(infected | features) under the generating model.
  std::vector<double> bayes_probability;
};

SyntheticSample generate_synthetic(const GeneratorConfig& config);

/// Closed-form posterior P(infected | record features) for the given generator.
double bayes_posterior(const GeneratorConfig& config, const PatientRecord& record);

}  // namespace riskml
