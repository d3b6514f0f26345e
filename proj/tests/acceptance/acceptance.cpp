// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "riskml/adaboost.hpp"
#include "riskml/gbt.hpp"
#include "riskml/generator.hpp"
#include "riskml/knn.hpp"
#include "riskml/linear.hpp"
#include "riskml/metrics.hpp"
#include "riskml/mlp.hpp"
#include "riskml/persistence.hpp"
#include "riskml/split.hpp"
#include "riskml/stats.hpp"
#include "riskml/tree.hpp"
#include "riskml/validation.hpp"

namespace fs = std::filesystem;
using namespace riskml;

namespace {

constexpr double kCorrelationTarget = 0.36;
constexpr double kCorrelationTolerance = 0.02;
constexpr double kBayesTarget = 0.90;
constexpr double kBayesTolerance = 0.01;
constexpr double kTrainedLow = 0.85;
constexpr double kTrainedHigh = 0.92;
constexpr double kEveryModelFloor = 0.75;
constexpr double kLeafTolerance = 1e-9;
constexpr double kLogisticGradientTolerance = 1e-6;
constexpr double kMlpGradientTolerance = 1e-4;
constexpr double kFormulaTolerance = 1e-12;
constexpr double kCompareBudgetSeconds = 60.0;
constexpr std::uint64_t kSeeds[] = {42, 43, 44, 45, 46};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "riskml_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string at(const std::string& name) { return (workdir() / name).string(); }

Outcome protocol() {
  if (cli({"gen-data", "--n", "4000", "--seed", "42", "--out", at("protocol.csv")}).code != 0) {
    return {false, "gen-data failed"};
  }
  const auto train = cli({"train", "--model", "logistic", "--data", at("protocol.csv"), "--test-ratio", "0.2"});
  const auto cv = cli({"cv", "--model", "logistic", "--data", at("protocol.csv"), "--k", "5"});
  const bool split_ok = train.code == 0 && train.out.find("train=3200 test=800") != std::string::npos;
  const bool cv_ok = cv.code == 0 && cv.out.find("evaluated=4000 each_once=yes") != std::string::npos;

  const auto dataset = generate_synthetic(GeneratorConfig{}).dataset;
  const auto report = cross_validate(ModelSpec{ModelKind::logistic, {}}, dataset, 5, 42);
  const bool counts_ok =
      std::all_of(report.evaluation_count.begin(), report.evaluation_count.end(), [](auto c) { return c == 1; });
  return {split_ok && cv_ok && counts_ok, std::string("split 3200/800 ") + (split_ok ? "yes" : "no") +
                                              ", cv each record once " + (cv_ok && counts_ok ? "yes" : "no")};
}

Outcome correlation() {
  const auto dataset = generate_synthetic(GeneratorConfig{}).dataset;
  std::vector<double> age, infected;
  for (const auto& r : dataset.records()) {
    age.push_back(r.age);
    infected.push_back(*r.infected);
  }
  const double r = pearson(age, infected);
  return {std::abs(r - kCorrelationTarget) <= kCorrelationTolerance,
          fmt("pearson(age, infected) = %.4f", r) + fmt(" (target %.2f", kCorrelationTarget) +
              fmt(" +/- %.2f)", kCorrelationTolerance)};
}

Outcome accuracy_ceiling() {
  std::vector<double> bayes;
  std::vector<std::vector<double>> per_model(kAllModelKinds.size());
  for (auto seed : kSeeds) {
    GeneratorConfig config;
    config.seed = seed;
    const auto sample = generate_synthetic(config);
    const auto labels = sample.dataset.labels();
    double correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += (sample.bayes_probability[i] >= 0.5) == (labels[i] == 1);
    bayes.push_back(correct / static_cast<double>(labels.size()));

    const auto split = train_test_split(sample.dataset, 0.2, seed);
    const auto table = compare_models(kAllModelKinds, Hyperparameters{}, split.train, split.test, seed);
    for (const auto& row : table.rows) {
      const auto k = static_cast<std::size_t>(row.kind);
      per_model[k].push_back(row.metrics ? row.metrics->accuracy : 0.0);
    }
  }
  const auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  const double bayes_mean = mean(bayes);
  bool pass = std::abs(bayes_mean - kBayesTarget) <= kBayesTolerance;
  std::string detail = fmt("bayes %.4f", bayes_mean);
  double worst = 1.0;
  std::string worst_name;
  for (std::size_t k = 0; k < kAllModelKinds.size(); ++k) {
    const double m = mean(per_model[k]);
    if (m < worst) {
      worst = m;
      worst_name = model_kind_name(kAllModelKinds[k]);
    }
    pass = pass && m >= kEveryModelFloor;
    const auto kind = kAllModelKinds[k];
    if (kind == ModelKind::mlp || kind == ModelKind::gbt_depthwise) {
      pass = pass && m >= kTrainedLow && m <= kTrainedHigh;
      detail += ", " + std::string(model_kind_name(kind)) + fmt(" %.4f", m);
    }
  }
  detail += ", lowest " + worst_name + fmt(" %.4f", worst);
  return {pass, detail};
}

Outcome overfit_regularization() {
  ModelSpec spec{ModelKind::gbt_depthwise, {}};
  spec.hyperparameters.gbt_depthwise.max_depth = 8;
  spec.hyperparameters.gbt_depthwise.n_rounds = 300;
  const SweepGrid grid;
  const std::size_t lo = 0;
  const std::size_t hi = grid.min_child_weights.size() - 1;
  double gap_lo = 0.0, gap_hi = 0.0;
  for (auto seed : kSeeds) {
    GeneratorConfig config;
    config.seed = seed;
    const auto split = train_test_split(generate_synthetic(config).dataset, 0.2, seed);
    const auto result = overfit_sweep(spec, split.train, split.test, grid, seed);
    gap_lo += result.mean_gap_at_min_child_weight(lo);
    gap_hi += result.mean_gap_at_min_child_weight(hi);
  }
  gap_lo /= std::size(kSeeds);
  gap_hi /= std::size(kSeeds);
  return {gap_hi < gap_lo, fmt("gap at min_child_weight=20 %.4f", gap_hi) +
                               fmt(" vs min_child_weight=1 %.4f", gap_lo)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  int split_mismatch = 0;
  std::uniform_int_distribution<std::size_t> size(2, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = size(rng);
    auto x = oracle::random_matrix(rng, n, 7, 2);
    if (trial % 2 == 0) {
      for (std::size_t r = 0; r < n; ++r) x(r, 0) = std::round(x(r, 0) * 2.0);
    }
    const auto y = oracle::random_labels(rng, n);
    std::vector<std::size_t> samples(n), features(7);
    std::iota(samples.begin(), samples.end(), std::size_t{0});
    std::iota(features.begin(), features.end(), std::size_t{0});
    const auto got = find_best_split(x, y, samples, features);
    const auto want = oracle::exhaustive_split(x, y, samples);
    const bool same = got.has_value() == want.has_value() &&
                      (!got || (got->feature == want->feature && got->threshold == want->threshold &&
                                std::abs(got->impurity_decrease - want->decrease) <= kLeafTolerance));
    if (!same) ++split_mismatch;
  }

  int knn_mismatch = 0;
  const auto points = oracle::random_matrix(rng, 300, 7, 2);
  const auto labels = oracle::random_labels(rng, 300);
  const auto model = make_knn(points, labels, 5);
  for (int q = 0; q < 200; ++q) {
    const auto query = q % 2 == 0 ? points.select_rows(std::vector<std::size_t>{static_cast<std::size_t>(q)})
                                  : oracle::random_matrix(rng, 1, 7, 2);
    if (knn_neighbors(model, query.row(0)) != oracle::naive_knn(points, query.row(0), 5)) ++knn_mismatch;
  }

  double leaf_error = 0.0;
  std::uniform_real_distribution<double> g(-50.0, 50.0), h(0.0, 40.0), l(1e-3, 5.0);
  for (int i = 0; i < 10; ++i) {
    const double G = g(rng), H = h(rng), L = l(rng);
    const double bound = std::abs(G) / L + 1.0;
    const double numeric = oracle::minimize_1d([&](double w) { return G * w + 0.5 * (H + L) * w * w; }, -bound, bound);
    leaf_error = std::max(leaf_error, std::abs(gbt_leaf_value(G, H, L) - numeric));
  }
  return {split_mismatch == 0 && knn_mismatch == 0 && leaf_error <= kLeafTolerance,
          "split mismatches " + std::to_string(split_mismatch) + "/100, knn mismatches " +
              std::to_string(knn_mismatch) + "/200" + fmt(", leaf max error %.2e", leaf_error)};
}

std::vector<double> flatten(const MlpParams& p) {
  std::vector<double> out;
  for (const auto& layer : p.layers) {
    out.insert(out.end(), layer.weights.values().begin(), layer.weights.values().end());
    out.insert(out.end(), layer.bias.begin(), layer.bias.end());
  }
  return out;
}

MlpParams unflatten(const MlpParams& shape, const std::vector<double>& flat) {
  MlpParams p = shape;
  std::size_t k = 0;
  for (auto& layer : p.layers) {
    for (auto& v : layer.weights.values()) v = flat[k++];
    for (auto& v : layer.bias) v = flat[k++];
  }
  return p;
}

Outcome gradient_checks() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto x = oracle::random_matrix(rng, 40, 7, 2);
  const auto y = oracle::random_labels(rng, 40);
  double logistic_worst = 0.0;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> p(8);
    for (auto& v : p) v = normal(rng);
    const auto analytic = logistic_objective(x, y, std::span(p).first(7), p[7], 0.01);
    const auto numeric = oracle::numeric_gradient(
        [&](const std::vector<double>& q) { return logistic_objective(x, y, std::span(q).first(7), q[7], 0.01).loss; },
        p, 1e-5);
    for (std::size_t i = 0; i < 7; ++i) {
      logistic_worst = std::max(logistic_worst, oracle::relative_error(analytic.weight_gradient[i], numeric[i]));
    }
    logistic_worst = std::max(logistic_worst, oracle::relative_error(analytic.bias_gradient, numeric[7]));
  }

  const auto xm = oracle::random_matrix(rng, 12, 7, 2);
  const auto ym = oracle::random_labels(rng, 12);
  double mlp_worst = 0.0;
  std::normal_distribution<double> small(0.0, 0.1);
  for (std::uint64_t point = 0; point < 10; ++point) {
    auto p = init_mlp(MlpArchitecture{}, 500 + point);
    for (auto& layer : p.layers) {
      for (auto& b : layer.bias) b = small(rng);
    }
    const auto analytic = flatten(mlp_gradients(p, xm, ym).gradient);
    const auto numeric = oracle::numeric_gradient(
        [&](const std::vector<double>& q) { return mlp_loss(unflatten(p, q), xm, ym); }, flatten(p), 1e-5);
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      mlp_worst = std::max(mlp_worst, oracle::relative_error(analytic[i], numeric[i], 1e-7));
    }
  }
  return {logistic_worst <= kLogisticGradientTolerance && mlp_worst <= kMlpGradientTolerance,
          fmt("logistic max rel error %.2e", logistic_worst) + fmt(", mlp max rel error %.2e", mlp_worst) +
              " over 10 points each"};
}

Outcome formula_units() {
  const double gini = gini_impurity(3, 1);
  const double alpha = adaboost_alpha(0.1);
  const double gain = gbt_split_gain(2, 3, -2, 3, 1, 0);
  const auto m = metrics_from_confusion(ConfusionMatrix{2, 1, 1, 4});
  const auto close = [](double a, double b) { return std::abs(a - b) <= kFormulaTolerance; };
  const bool pass = close(gini, 0.375) && close(alpha, 0.5 * std::log(9.0)) && close(gain, 1.0) &&
                    close(m.accuracy, 0.75) && close(m.precision, 2.0 / 3.0) && close(m.recall, 2.0 / 3.0) &&
                    close(m.f1, 2.0 / 3.0);
  return {pass, fmt("gini %.12f", gini) + fmt(", alpha %.12f", alpha) + fmt(", gain %.12f", gain) +
                    fmt(", accuracy %.12f", m.accuracy) + fmt(", f1 %.12f", m.f1)};
}

// Runs every command in a fresh directory and returns exit codes, console output and every
// file written, concatenated.
std::string command_outputs(bool& all_succeeded) {
  const std::string dir = "run";
  fs::remove_all(workdir() / dir);
  fs::create_directories(workdir() / dir);
  const auto p = [&](const std::string& name) { return at(dir + "/" + name); };
  std::string all;
  const auto record = [&](std::vector<std::string> args) {
    const auto r = cli(std::move(args));
    all_succeeded = all_succeeded && r.code == 0;
    all += std::to_string(r.code) + "\n" + r.out + r.err;
  };
  record({"gen-data", "--n", "4000", "--seed", "42", "--out", p("d.csv")});
  record({"inspect", "--data", p("d.csv"), "--correlation-out", p("corr.csv"), "--summary-out", p("summary.csv")});
  record({"train", "--model", "mlp", "--data", p("d.csv"), "--out", p("mlp.model"), "--trace-out", p("trace.csv")});
  record({"train", "--model", "forest", "--data", p("d.csv"), "--out", p("forest.model")});
  for (const char* m : {"mlp.model", "forest.model"}) {
    record({"predict", "--model", p(m), "--age", "52", "--temp", "100.9", "--fatigue", "1", "--cough", "1",
            "--body-pain", "0", "--sore-throat", "0", "--breathing-difficulty", "1"});
  }
  record({"cv", "--model", "gbt-leafwise", "--data", p("d.csv"), "--k", "5", "--out", p("cv.csv")});
  record({"sweep", "--model", "gbt-depthwise", "--data", p("d.csv"), "--rounds", "30", "--out", p("sweep.csv")});
  record({"compare", "--data", p("d.csv"), "--out", p("compare.csv")});
  for (const char* f : {"d.csv", "corr.csv", "summary.csv", "mlp.model", "trace.csv", "forest.model", "cv.csv",
                        "sweep.csv", "compare.csv"}) {
    all += slurp(p(f));
  }
  return all;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Outcome determinism_and_persistence() {
  bool succeeded = true;
  const auto first = command_outputs(succeeded);
  const auto second = command_outputs(succeeded);
  const bool bytes_equal = succeeded && first == second;

  const auto split = train_test_split(generate_synthetic(GeneratorConfig{}).dataset, 0.2, 42);
  const auto x = split.train.features();
  const auto y = split.train.labels();
  const auto probe = split.test.features();
  int round_trip_failures = 0;
  for (auto kind : kAllModelKinds) {
    PersistedModel original;
    original.spec = ModelSpec{kind, {}};
    original.seed = 42;
    original.training_data = fingerprint(x, y);
    original.model = fit_model(original.spec, x, y, 42);
    const auto text = serialize_model(original);
    const auto loaded = deserialize_model(text);
    bool same = serialize_model(loaded) == text;
    for (std::size_t r = 0; r < probe.rows() && same; ++r) {
      same = bit_equal(original.model->predict_proba(probe.row(r)), loaded.model->predict_proba(probe.row(r)));
    }
    if (!same) ++round_trip_failures;
  }
  return {bytes_equal && round_trip_failures == 0,
          std::string("repeat runs byte-identical ") + (bytes_equal ? "yes" : "no") + ", round-trip failures " +
              std::to_string(round_trip_failures) + "/" + std::to_string(kAllModelKinds.size())};
}

Outcome runtime_budget() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = cli({"compare", "--n", "4000", "--seed", "42", "--out", at("budget.csv")});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto csv = slurp(at("budget.csv"));
  const bool all_rows = std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(kAllModelKinds.size());
  const bool no_failures = csv.find("failed") == std::string::npos;
  return {r.code == 0 && all_rows && no_failures && seconds < kCompareBudgetSeconds,
          fmt("compare on 4000 records took %.1f s", seconds) + fmt(" (budget %.0f s)", kCompareBudgetSeconds)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"protocol", protocol},
      {"correlation", correlation},
      {"accuracy-ceiling", accuracy_ceiling},
      {"overfit-regularization", overfit_regularization},
      {"oracle-equivalence", oracle_equivalence},
      {"gradient-checks", gradient_checks},
      {"formula-units", formula_units},
      {"determinism-persistence", determinism_and_persistence},
      {"runtime-budget", runtime_budget},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s %zu %s: %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  fs::remove_all(workdir());
  return failures == 0 ? 0 : 1;
}
