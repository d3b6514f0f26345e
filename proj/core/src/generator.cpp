#include "riskml/generator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "riskml/random.hpp"

namespace riskml {
namespace {

void require_probability(double p, const std::string& name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("GeneratorConfig: " + name + " must lie in [0, 1]");
}

void require_normal(const NormalParams& p, const std::string& name) {
  if (!std::isfinite(p.mean)) throw std::invalid_argument("GeneratorConfig: " + name + " mean must be finite");
  if (!(p.stddev > 0.0) || !std::isfinite(p.stddev)) {
    throw std::invalid_argument("GeneratorConfig: " + name + " stddev must be > 0");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Rejection sampling from N(mean, stddev) restricted to [lo, hi].
double truncated_normal(Rng& rng, const NormalParams& p, double lo, double hi) {
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const double v = p.mean + p.stddev * standard_normal(rng);
    if (v >= lo && v <= hi) return v;
  }
  throw std::invalid_argument("GeneratorConfig: normal distribution has negligible mass inside its valid range");
}

double truncated_normal_log_density(double x, const NormalParams& p, double lo, double hi) {
  const double z = (x - p.mean) / p.stddev;
  const double mass = normal_cdf((hi - p.mean) / p.stddev) - normal_cdf((lo - p.mean) / p.stddev);
  return -0.5 * z * z - std::log(p.stddev) - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(mass);
}

double log_bernoulli(int value, double p) { return value == 1 ? std::log(p) : std::log1p(-p); }

double class_log_likelihood(const GeneratorConfig& c, const PatientRecord& r, bool infected) {
  const auto& age = infected ? c.age_infected : c.age_healthy;
  const auto& temp = infected ? c.temperature_infected : c.temperature_healthy;
  const auto& symptom_p = infected ? c.symptom_given_infected : c.symptom_given_healthy;
  const std::array<int, kSymptomCount> flags{r.fatigue, r.cough, r.body_pain, r.sore_throat, r.breathing_difficulty};
  double ll = truncated_normal_log_density(r.age, age, kMinAge, kMaxAge) +
              truncated_normal_log_density(r.body_temperature, temp, kMinTemperature, kMaxTemperature);
  for (std::size_t s = 0; s < kSymptomCount; ++s) ll += log_bernoulli(flags[s], symptom_p[s]);
  return ll;
}

}  // namespace

void GeneratorConfig::validate() const {
  require_probability(class_balance, "class_balance");
  for (std::size_t s = 0; s < kSymptomCount; ++s) {
    const std::string name(kFeatureNames[kFirstSymptomColumn + s]);
    require_probability(symptom_given_infected[s], name + " | infected");
    require_probability(symptom_given_healthy[s], name + " | healthy");
  }
  require_normal(age_healthy, "age_healthy");
  require_normal(age_infected, "age_infected");
  require_normal(temperature_healthy, "temperature_healthy");
  require_normal(temperature_infected, "temperature_infected");
}

double bayes_posterior(const GeneratorConfig& config, const PatientRecord& record) {
  if (config.class_balance >= 1.0) return 1.0;
  if (config.class_balance <= 0.0) return 0.0;
  const double log_pos = std::log(config.class_balance) + class_log_likelihood(config, record, true);
  const double log_neg = std::log1p(-config.class_balance) + class_log_likelihood(config, record, false);
  if (std::isinf(log_pos) && std::isinf(log_neg)) return config.class_balance;
  const double diff = log_neg - log_pos;
  if (diff > 0.0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

SyntheticSample generate_synthetic(const GeneratorConfig& config) {
  config.validate();
  Rng rng = make_rng(config.seed, stream::kGenerator);

  std::vector<PatientRecord> records;
  records.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const bool infected = uniform_unit(rng) < config.class_balance;
    PatientRecord r;
    r.infected = infected ? 1 : 0;
    r.age = truncated_normal(rng, infected ? config.age_infected : config.age_healthy, kMinAge, kMaxAge);
    r.body_temperature = truncated_normal(rng, infected ? config.temperature_infected : config.temperature_healthy,
                                          kMinTemperature, kMaxTemperature);
    const auto& p = infected ? config.symptom_given_infected : config.symptom_given_healthy;
    std::array<int, kSymptomCount> flags{};
    for (std::size_t s = 0; s < kSymptomCount; ++s) flags[s] = uniform_unit(rng) < p[s] ? 1 : 0;
    r.fatigue = flags[0];
    r.cough = flags[1];
    r.body_pain = flags[2];
    r.sore_throat = flags[3];
    r.breathing_difficulty = flags[4];
    records.push_back(r);
  }

  SyntheticSample sample{Dataset(std::move(records)), {}};
  sample.bayes_probability.reserve(config.n);
  for (const auto& r : sample.dataset.records()) sample.bayes_probability.push_back(bayes_posterior(config, r));
  return sample;
}

}  // namespace riskml
