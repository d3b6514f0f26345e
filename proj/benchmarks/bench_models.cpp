#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "riskml/gbt.hpp"
#include "riskml/generator.hpp"
#include "riskml/knn.hpp"
#include "riskml/mlp.hpp"
#include "riskml/split.hpp"
#include "riskml/standardizer.hpp"
#include "riskml/tree.hpp"

namespace {

struct Data {
  riskml::Matrix train_x;
  riskml::Matrix test_x;
  riskml::Labels train_y;
  riskml::Labels test_y;
};

const Data& data() {
  static const Data d = [] {
    const auto split = riskml::train_test_split(riskml::generate_synthetic(riskml::GeneratorConfig{}).dataset, 0.2, 42);
    const auto s = riskml::Standardizer::fit(split.train.features());
    return Data{s.transform(split.train.features()), s.transform(split.test.features()), split.train.labels(),
                split.test.labels()};
  }();
  return d;
}

}  // namespace

static void BM_GbtTrain(benchmark::State& state) {
  const auto& d = data();
  riskml::GbtConfig config;
  config.n_rounds = static_cast<int>(state.range(0));
  config.max_depth = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(riskml::train_gbt(d.train_x, d.train_y, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GbtTrain)->Args({100, 3})->Args({300, 8})->Unit(benchmark::kMillisecond);

static void BM_BestSplit(benchmark::State& state) {
  const auto& d = data();
  std::vector<std::size_t> samples(static_cast<std::size_t>(state.range(0)));
  std::iota(samples.begin(), samples.end(), std::size_t{0});
  std::vector<std::size_t> features(d.train_x.cols());
  std::iota(features.begin(), features.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(riskml::find_best_split(d.train_x, d.train_y, samples, features));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BestSplit)->RangeMultiplier(4)->Range(50, 3200);

static void BM_TreeTrain(benchmark::State& state) {
  const auto& d = data();
  riskml::TreeConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(riskml::train_decision_tree(d.train_x, d.train_y, config));
}
BENCHMARK(BM_TreeTrain)->Unit(benchmark::kMillisecond);

static void BM_MlpEpoch(benchmark::State& state) {
  const auto& d = data();
  riskml::MlpTrainConfig config;
  config.epochs = 1;
  const riskml::Matrix no_validation(0, d.train_x.cols());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        riskml::train_mlp(d.train_x, d.train_y, no_validation, riskml::Labels{}, riskml::MlpArchitecture{}, config));
  }
}
BENCHMARK(BM_MlpEpoch)->Unit(benchmark::kMillisecond);

static void BM_KnnQuery(benchmark::State& state) {
  const auto& d = data();
  const auto model = riskml::make_knn(d.train_x, d.train_y, static_cast<std::size_t>(state.range(0)));
  std::size_t row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(riskml::knn_predict_proba(model, d.test_x.row(row)));
    row = (row + 1) % d.test_x.rows();
  }
}
BENCHMARK(BM_KnnQuery)->Arg(1)->Arg(5)->Arg(25);
BENCHMARK_MAIN();
