#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "riskml/csv.hpp"
#include "riskml/errors.hpp"
#include "riskml/generator.hpp"
#include "riskml/metrics.hpp"
#include "riskml/model.hpp"
#include "riskml/persistence.hpp"
#include "riskml/serialization.hpp"
#include "riskml/split.hpp"
#include "riskml/stats.hpp"
#include "riskml/validation.hpp"

namespace riskml::cli {
namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw DataError("failed writing output file: " + path);
}

// Writes through `write` either to `path` or, when it is empty, to `fallback`.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  auto file = open_output(path);
  write(file);
  finish_output(file, path);
}

Hyperparameters load_hyperparameters(const std::string& path) {
  Hyperparameters hp;
  if (path.empty()) return hp;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open params file: " + path);
  nlohmann::json patch;
  try {
    patch = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("params file is not valid JSON: ") + e.what());
  }
  nlohmann::json merged = hp;
  merged.merge_patch(patch);
  try {
    merged.get_to(hp);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("params file: ") + e.what());
  }
  return hp;
}

void print_metrics(std::ostream& out, const MetricsReport& m) {
  out << "accuracy=" << fixed4(m.accuracy) << " precision=" << fixed4(m.precision) << " recall=" << fixed4(m.recall)
      << " f1=" << fixed4(m.f1) << '\n';
  out << "tp=" << m.confusion.tp << " fp=" << m.confusion.fp << " fn=" << m.confusion.fn << " tn=" << m.confusion.tn
      << '\n';
}

std::vector<ModelKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<ModelKind> kinds;
  if (names.empty()) return {kAllModelKinds.begin(), kAllModelKinds.end()};
  for (const auto& n : names) kinds.push_back(parse_model_kind(n));
  return kinds;
}

struct GenDataArgs {
  std::size_t n = 4000;
  double balance = 0.5;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
  GeneratorConfig config;
  config.n = a.n;
  config.class_balance = a.balance;
  config.seed = a.seed;
  const auto sample = generate_synthetic(config);
  auto file = open_output(a.out);
  write_csv(sample.dataset, file);
  finish_output(file, a.out);
  out << "wrote " << sample.dataset.size() << " records to " << a.out << '\n';
  return kOk;
}

struct InspectArgs {
  std::string data;
  std::string correlation_out;
  std::string summary_out;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  const auto dataset = load_csv(a.data);
  require_labeled(dataset, "inspect");
  emit(a.correlation_out, out, [&](std::ostream& o) { write_correlation_csv(pearson_correlation(dataset), o); });
  if (!a.summary_out.empty()) {
    const auto summaries = class_summaries(dataset);
    emit(a.summary_out, out, [&](std::ostream& o) { write_summary_csv(summaries, o); });
  }
  return kOk;
}

struct TrainArgs {
  std::string model = "mlp";
  std::string data;
  double test_ratio = 0.2;
  std::uint64_t seed = 42;
  std::string out;
  std::string trace_out;
  std::string params;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const ModelSpec spec{parse_model_kind(a.model), load_hyperparameters(a.params)};
  if (!a.trace_out.empty() && spec.kind != ModelKind::mlp) {
    throw std::invalid_argument("--trace-out is only available for --model mlp");
  }
  const auto dataset = load_csv(a.data);
  const auto split = train_test_split(dataset, a.test_ratio, a.seed);
  const Matrix train_x = split.train.features();
  const Labels train_y = split.train.labels();
  const Matrix test_x = split.test.features();
  const Labels test_y = split.test.labels();

  TrainingTrace trace;
  FitContext context;
  if (!a.trace_out.empty()) context = FitContext{&test_x, &test_y, &trace};
  PersistedModel persisted;
  persisted.spec = spec;
  persisted.seed = a.seed;
  persisted.training_data = fingerprint(train_x, train_y);
  persisted.model = fit_model(spec, train_x, train_y, a.seed, context);

  out << "model=" << model_kind_name(spec.kind) << " train=" << split.train.size() << " test=" << split.test.size()
      << '\n';
  print_metrics(out, compute_metrics(test_y, persisted.model->predict_class_batch(test_x)));

  if (!a.out.empty()) save_model(persisted, a.out);
  if (!a.trace_out.empty()) {
    emit(a.trace_out, out, [&](std::ostream& o) { write_trace_csv(trace, o); });
  }
  return kOk;
}

struct PredictArgs {
  std::string model;
  double age = 0.0;
  double temp = 0.0;
  int fatigue = 0;
  int cough = 0;
  int body_pain = 0;
  int sore_throat = 0;
  int breathing_difficulty = 0;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  PatientRecord record{a.age, a.temp, a.fatigue, a.cough, a.body_pain, a.sore_throat, a.breathing_difficulty,
                       std::nullopt};
  validate_record(record);
  const auto persisted = load_model(a.model);
  const auto features = record.features();
  const double p = persisted.model->predict_proba(features);
  out << "probability=" << fixed4(p) << " class=" << persisted.model->predict_class(features) << '\n';
  return kOk;
}

struct CvArgs {
  std::string model = "mlp";
  std::string data;
  std::size_t k = 5;
  std::uint64_t seed = 42;
  std::string out;
  std::string params;
};

int cmd_cv(const CvArgs& a, std::ostream& out) {
  const ModelSpec spec{parse_model_kind(a.model), load_hyperparameters(a.params)};
  const auto dataset = load_csv(a.data);
  const auto report = cross_validate(spec, dataset, a.k, a.seed);

  auto write_folds = [&](std::ostream& o) {
    o << "fold,size,accuracy,precision,recall,f1\n";
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
      const auto& m = report.folds[f];
      o << f << ',' << m.confusion.total() << ',' << format_double(m.accuracy) << ',' << format_double(m.precision)
        << ',' << format_double(m.recall) << ',' << format_double(m.f1) << '\n';
    }
  };
  if (!a.out.empty()) emit(a.out, out, write_folds);

  out << "model=" << model_kind_name(spec.kind) << " k=" << a.k << '\n';
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    out << "fold " << f << " n=" << report.folds[f].confusion.total()
        << " accuracy=" << fixed4(report.folds[f].accuracy) << '\n';
  }
  const auto evaluated_once = std::all_of(report.evaluation_count.begin(), report.evaluation_count.end(),
                                          [](std::size_t c) { return c == 1; });
  out << "evaluated=" << dataset.size() << " each_once=" << (evaluated_once ? "yes" : "no") << '\n';
  out << "mean accuracy=" << fixed4(report.accuracy.mean) << " (sd " << fixed4(report.accuracy.stddev) << ")"
      << " precision=" << fixed4(report.precision.mean) << " recall=" << fixed4(report.recall.mean)
      << " f1=" << fixed4(report.f1.mean) << '\n';
  return kOk;
}

struct SweepArgs {
  std::string model = "gbt-depthwise";
  std::string data;
  double validation_ratio = 0.2;
  std::uint64_t seed = 42;
  std::vector<double> learning_rates{0.01, 0.05, 0.1, 0.3};
  std::vector<double> min_child_weights{1.0, 5.0, 10.0, 20.0};
  std::optional<int> max_depth;
  std::optional<int> rounds;
  std::string out;
  std::string params;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  ModelSpec spec{parse_model_kind(a.model), load_hyperparameters(a.params)};
  if (a.max_depth || a.rounds) {
    auto apply = [&](GbtConfig& c) {
      if (a.max_depth) c.max_depth = *a.max_depth;
      if (a.rounds) c.n_rounds = *a.rounds;
    };
    switch (spec.kind) {
      case ModelKind::gbt_depthwise: apply(spec.hyperparameters.gbt_depthwise); break;
      case ModelKind::gbt_leafwise: apply(spec.hyperparameters.gbt_leafwise); break;
      case ModelKind::catboost: apply(spec.hyperparameters.catboost.gbt); break;
      default: throw std::invalid_argument("--max-depth and --rounds apply to gbt-depthwise, gbt-leafwise and catboost");
    }
  }
  const auto dataset = load_csv(a.data);
  const auto split = train_test_split(dataset, a.validation_ratio, a.seed);
  const SweepGrid grid{a.learning_rates, a.min_child_weights};
  const auto result = overfit_sweep(spec, split.train, split.test, grid, a.seed);

  emit(a.out, out, [&](std::ostream& o) { write_sweep_csv(result, o); });
  if (!a.out.empty()) {
    out << "model=" << model_kind_name(spec.kind) << " train=" << split.train.size()
        << " validation=" << split.test.size() << '\n';
    if (!result.mapping.learning_rate) out << "note: learning_rate has no effect on this model\n";
    if (!result.mapping.min_child_weight) out << "note: min_child_weight has no effect on this model\n";
    for (std::size_t j = 0; j < grid.min_child_weights.size(); ++j) {
      out << "min_child_weight=" << format_double(grid.min_child_weights[j])
          << " mean_gap=" << fixed4(result.mean_gap_at_min_child_weight(j)) << '\n';
    }
  }
  return kOk;
}

struct CompareArgs {
  std::string data;
  std::size_t n = 4000;
  double test_ratio = 0.2;
  std::uint64_t seed = 42;
  std::vector<std::string> models;
  std::string out;
  std::string params;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const auto hp = load_hyperparameters(a.params);
  const auto kinds = parse_kinds(a.models);
  Dataset dataset = [&] {
    if (!a.data.empty()) return load_csv(a.data);
    GeneratorConfig config;
    config.n = a.n;
    config.seed = a.seed;
    return generate_synthetic(config).dataset;
  }();
  const auto split = train_test_split(dataset, a.test_ratio, a.seed);
  const auto table = compare_models(kinds, hp, split.train, split.test, a.seed);

  if (!a.out.empty()) emit(a.out, out, [&](std::ostream& o) { write_comparison_csv(table, o); });

  out << "train=" << split.train.size() << " test=" << split.test.size() << '\n';
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %9s %9s %9s %9s\n", "model", "accuracy", "precision", "recall", "f1");
  out << line;
  bool any_ok = false;
  for (const auto& row : table.rows) {
    const std::string name(model_kind_name(row.kind));
    if (row.metrics) {
      any_ok = true;
      std::snprintf(line, sizeof line, "%-14s %9.4f %9.4f %9.4f %9.4f\n", name.c_str(), row.metrics->accuracy,
                    row.metrics->precision, row.metrics->recall, row.metrics->f1);
      out << line;
    } else {
      std::snprintf(line, sizeof line, "%-14s %9s\n", name.c_str(), "failed");
      out << line;
      err << "error:model: " << name << ": " << row.error << '\n';
    }
  }
  if (!any_ok) throw NumericError("every model failed to train");
  return kOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infection risk classifiers on tabular symptom data", "riskml"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic labeled dataset");
  gen_cmd->add_option("--n", gen.n, "Number of records")->capture_default_str();
  gen_cmd->add_option("--balance", gen.balance, "Fraction of infected records")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  InspectArgs inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Correlation matrix and per-class feature summaries");
  inspect_cmd->add_option("--data", inspect.data, "Labeled CSV")->required();
  inspect_cmd->add_option("--correlation-out", inspect.correlation_out, "Correlation CSV (default: stdout)");
  inspect_cmd->add_option("--summary-out", inspect.summary_out, "Per-class summary CSV");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one model on a stratified split and report test metrics");
  train_cmd->add_option("--model", train.model, "Model kind")->capture_default_str();
  train_cmd->add_option("--data", train.data, "Labeled CSV")->required();
  train_cmd->add_option("--test-ratio", train.test_ratio, "Held-out fraction")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Master seed")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Model file");
  train_cmd->add_option("--trace-out", train.trace_out, "Per-epoch trace CSV (mlp only)");
  train_cmd->add_option("--params", train.params, "JSON hyperparameter overrides");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Score one patient with a saved model");
  predict_cmd->add_option("--model", predict.model, "Model file")->required();
  predict_cmd->add_option("--age", predict.age, "Age in years")->required();
  predict_cmd->add_option("--temp", predict.temp, "Body temperature in Fahrenheit")->required();
  predict_cmd->add_option("--fatigue", predict.fatigue, "0 or 1")->required();
  predict_cmd->add_option("--cough", predict.cough, "0 or 1")->required();
  predict_cmd->add_option("--body-pain", predict.body_pain, "0 or 1")->required();
  predict_cmd->add_option("--sore-throat", predict.sore_throat, "0 or 1")->required();
  predict_cmd->add_option("--breathing-difficulty", predict.breathing_difficulty, "0 or 1")->required();

  CvArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  cv_cmd->add_option("--model", cv.model, "Model kind")->capture_default_str();
  cv_cmd->add_option("--data", cv.data, "Labeled CSV")->required();
  cv_cmd->add_option("--k", cv.k, "Number of folds")->capture_default_str();
  cv_cmd->add_option("--seed", cv.seed, "Master seed")->capture_default_str();
  cv_cmd->add_option("--out", cv.out, "Per-fold CSV");
  cv_cmd->add_option("--params", cv.params, "JSON hyperparameter overrides");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Learning rate by min_child_weight overfitting sweep");
  sweep_cmd->add_option("--model", sweep.model, "Model kind")->capture_default_str();
  sweep_cmd->add_option("--data", sweep.data, "Labeled CSV")->required();
  sweep_cmd->add_option("--validation-ratio", sweep.validation_ratio, "Validation fraction")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--learning-rates", sweep.learning_rates, "Comma-separated values")->delimiter(',');
  sweep_cmd->add_option("--min-child-weights", sweep.min_child_weights, "Comma-separated values")->delimiter(',');
  sweep_cmd->add_option("--max-depth", sweep.max_depth, "Tree depth for boosted models");
  sweep_cmd->add_option("--rounds", sweep.rounds, "Boosting rounds");
  sweep_cmd->add_option("--out", sweep.out, "Sweep CSV (default: stdout)");
  sweep_cmd->add_option("--params", sweep.params, "JSON hyperparameter overrides");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Train every model on one split and rank by accuracy");
  compare_cmd->add_option("--data", compare.data, "Labeled CSV (default: generate)");
  compare_cmd->add_option("--n", compare.n, "Records to generate when --data is absent")->capture_default_str();
  compare_cmd->add_option("--test-ratio", compare.test_ratio, "Held-out fraction")->capture_default_str();
  compare_cmd->add_option("--seed", compare.seed, "Master seed")->capture_default_str();
  compare_cmd->add_option("--models", compare.models, "Comma-separated model kinds (default: all)")->delimiter(',');
  compare_cmd->add_option("--out", compare.out, "Comparison CSV");
  compare_cmd->add_option("--params", compare.params, "JSON hyperparameter overrides");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error:usage: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_data(gen, out);
    if (inspect_cmd->parsed()) return cmd_inspect(inspect, out);
    if (train_cmd->parsed()) return cmd_train(train, out);
    if (predict_cmd->parsed()) return cmd_predict(predict, out);
    if (cv_cmd->parsed()) return cmd_cv(cv, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
    if (compare_cmd->parsed()) return cmd_compare(compare, out, err);
  } catch (const DataError& e) {
    err << "error:data: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericError& e) {
    err << "error:numeric: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    err << "error:usage: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error:data: " << e.what() << '\n';
    return kDataError;
  }
  err << "error:usage: no subcommand\n";
  return kUsage;
}

}  // namespace riskml::cli
