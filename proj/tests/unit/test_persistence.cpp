#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

#include "riskml/errors.hpp"
#include "riskml/generator.hpp"
#include "riskml/persistence.hpp"
#include "riskml/split.hpp"

using namespace riskml;

namespace {

struct Fixture {
  Matrix x;
  Labels y;
};

const Fixture& training() {
  static const Fixture f = [] {
    const auto d = generate_synthetic(GeneratorConfig{.n = 500}).dataset;
    return Fixture{d.features(), d.labels()};
  }();
  return f;
}

Hyperparameters fast() {
  Hyperparameters hp;
  hp.forest.n_trees = 8;
  hp.gbt_depthwise.n_rounds = 15;
  hp.gbt_leafwise.n_rounds = 15;
  hp.catboost.gbt.n_rounds = 15;
  hp.adaboost.n_rounds = 10;
  hp.mlp.epochs = 3;
  return hp;
}

Matrix random_inputs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> age(0, 120), temp(90, 110);
  std::bernoulli_distribution b(0.5);
  Matrix m(n, 7);
  for (std::size_t r = 0; r < n; ++r) {
    m(r, 0) = age(rng);
    m(r, 1) = temp(rng);
    for (std::size_t c = 2; c < 7; ++c) m(r, c) = b(rng) ? 1.0 : 0.0;
  }
  return m;
}

PersistedModel trained(ModelKind kind) {
  PersistedModel p;
  p.spec = ModelSpec{kind, fast()};
  p.seed = 42;
  p.training_data = fingerprint(training().x, training().y);
  p.model = fit_model(p.spec, training().x, training().y, 42);
  return p;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

class RoundTrip : public ::testing::TestWithParam<ModelKind> {};

TEST_P(RoundTrip, BitIdenticalPredictions) {
  const auto original = trained(GetParam());
  const auto text = serialize_model(original);
  const auto loaded = deserialize_model(text);
  EXPECT_EQ(loaded.spec.kind, GetParam());
  EXPECT_EQ(loaded.seed, 42u);
  EXPECT_EQ(loaded.training_data, original.training_data);
  const auto inputs = random_inputs(100, 5);
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    const double a = original.model->predict_proba(inputs.row(r));
    const double b = loaded.model->predict_proba(inputs.row(r));
    EXPECT_TRUE(bit_equal(a, b)) << a << " vs " << b;
    EXPECT_EQ(original.model->predict_class(inputs.row(r)), loaded.model->predict_class(inputs.row(r)));
  }
  EXPECT_EQ(serialize_model(loaded), text);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, RoundTrip, ::testing::ValuesIn(kAllModelKinds),
                         [](const auto& info) {
                           std::string name(model_kind_name(info.param));
                           std::replace(name.begin(), name.end(), '-', '_');
                           return name;
                         });

TEST(ModelFile, SaveLoadThroughDisk) {
  const auto original = trained(ModelKind::gbt_depthwise);
  const auto path = std::filesystem::temp_directory_path() / "riskml_persistence_test.model";
  save_model(original, path);
  const auto loaded = load_model(path);
  const auto inputs = random_inputs(20, 9);
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    EXPECT_TRUE(bit_equal(original.model->predict_proba(inputs.row(r)), loaded.model->predict_proba(inputs.row(r))));
  }
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path), DataError);
}

TEST(ModelFile, BumpedVersionRejected) {
  auto doc = nlohmann::json::parse(serialize_model(trained(ModelKind::logistic)));
  doc["format_version"] = kModelFormatVersion + 1;
  try {
    deserialize_model(doc.dump());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("format_version"), std::string::npos) << e.what();
  }
}

TEST(ModelFile, CorruptionDetected) {
  auto doc = nlohmann::json::parse(serialize_model(trained(ModelKind::logistic)));
  doc["model"]["params"]["bias"] = doc["model"]["params"]["bias"].get<double>() + 1e-9;
  try {
    deserialize_model(doc.dump());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
  }
  EXPECT_THROW(deserialize_model("{not json"), DataError);
  EXPECT_THROW(deserialize_model("{}"), DataError);
}

TEST(ModelFile, KnnStoresWholeTrainingSet) {
  const auto split = train_test_split(generate_synthetic(GeneratorConfig{}).dataset, 0.2, 42);
  PersistedModel p;
  p.spec = ModelSpec{ModelKind::knn, {}};
  p.model = fit_model(p.spec, split.train.features(), split.train.labels(), 42);
  const auto doc = nlohmann::json::parse(serialize_model(p));
  EXPECT_EQ(doc["model"]["params"]["points"]["rows"].get<std::size_t>(), 3200u);
  EXPECT_EQ(doc["model"]["params"]["labels"].size(), 3200u);
}

TEST(ModelFile, CanonicalText) {
  const auto a = serialize_model(trained(ModelKind::forest));
  const auto b = serialize_model(trained(ModelKind::forest));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.back(), '\n');
}

TEST(Fingerprint, SensitiveToContent) {
  const auto& f = training();
  const auto a = fingerprint(f.x, f.y);
  EXPECT_EQ(a.rows, 500u);
  EXPECT_EQ(a.content_hash.size(), 16u);
  Labels flipped = f.y;
  flipped[3] = 1 - flipped[3];
  EXPECT_NE(fingerprint(f.x, flipped), a);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}
