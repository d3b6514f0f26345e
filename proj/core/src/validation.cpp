#include "riskml/validation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "riskml/csv.hpp"
#include "riskml/random.hpp"

namespace riskml {

MetricSummary summarize(std::span<const double> values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

CvReport cross_validate(const ModelFactory& factory, const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  require_labeled(dataset, "cross_validate");
  CvReport report;
  report.assignment = make_folds(dataset, k, seed);
  report.out_of_fold_probability.assign(dataset.size(), 0.0);
  report.evaluation_count.assign(dataset.size(), 0);

  const Matrix x = dataset.features();
  const Labels y = dataset.labels();
  std::vector<double> acc, prec, rec, f1;
  for (std::size_t fold = 0; fold < k; ++fold) {
    const auto train_idx = report.assignment.training_indices(fold);
    const auto val_idx = report.assignment.validation_indices(fold);
    const auto model = factory(x.select_rows(train_idx), select_labels(y, train_idx),
                               derive_seed(seed, stream::kFoldModelBase + fold));
    Labels truth, predicted;
    for (auto i : val_idx) {
      report.out_of_fold_probability[i] = model->predict_proba(x.row(i));
      ++report.evaluation_count[i];
      truth.push_back(y[i]);
      predicted.push_back(model->predict_class(x.row(i)));
    }
    const auto m = compute_metrics(truth, predicted);
    report.folds.push_back(m);
    acc.push_back(m.accuracy);
    prec.push_back(m.precision);
    rec.push_back(m.recall);
    f1.push_back(m.f1);
  }
  report.accuracy = summarize(acc);
  report.precision = summarize(prec);
  report.recall = summarize(rec);
  report.f1 = summarize(f1);
  return report;
}

CvReport cross_validate(const ModelSpec& spec, const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  return cross_validate(
      [&spec](const Matrix& x, std::span<const int> y, std::uint64_t s) { return fit_model(spec, x, y, s); }, dataset,
      k, seed);
}

AxisMapping sweep_axis_mapping(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic:
    case ModelKind::svm:
    case ModelKind::mlp:
      return {true, false};
    case ModelKind::tree:
    case ModelKind::forest:
      return {false, true};
    case ModelKind::gbt_depthwise:
    case ModelKind::gbt_leafwise:
    case ModelKind::catboost:
    case ModelKind::adaboost:
      return {true, true};
    case ModelKind::knn:
      return {false, false};
    case ModelKind::voting:
      break;
  }
  throw std::invalid_argument("sweep: the voting ensemble has no sweep mapping");
}

Hyperparameters apply_sweep_axes(ModelKind kind, Hyperparameters hp, double learning_rate, double min_child_weight) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("sweep: learning rates must be > 0");
  if (!(min_child_weight >= 0.0)) throw std::invalid_argument("sweep: min_child_weight values must be >= 0");
  const auto leaf_floor = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(min_child_weight)));
  switch (kind) {
    case ModelKind::logistic:
      hp.logistic.learning_rate = learning_rate;
      break;
    case ModelKind::svm:
      hp.svm.learning_rate = learning_rate;
      break;
    case ModelKind::mlp:
      hp.mlp.adam.step = learning_rate;
      break;
    case ModelKind::tree:
      hp.tree.min_samples_leaf = leaf_floor;
      break;
    case ModelKind::forest:
      hp.forest.tree.min_samples_leaf = leaf_floor;
      break;
    case ModelKind::gbt_depthwise:
      hp.gbt_depthwise.learning_rate = learning_rate;
      hp.gbt_depthwise.min_child_weight = min_child_weight;
      break;
    case ModelKind::gbt_leafwise:
      hp.gbt_leafwise.learning_rate = learning_rate;
      hp.gbt_leafwise.min_child_weight = min_child_weight;
      break;
    case ModelKind::catboost:
      hp.catboost.gbt.learning_rate = learning_rate;
      hp.catboost.gbt.min_child_weight = min_child_weight;
      break;
    case ModelKind::adaboost:
      hp.adaboost.learning_rate = learning_rate;
      hp.adaboost.min_samples_leaf = leaf_floor;
      break;
    case ModelKind::knn:
      break;
    case ModelKind::voting:
      throw std::invalid_argument("sweep: the voting ensemble has no sweep mapping");
  }
  return hp;
}

double SweepResult::mean_gap_at_min_child_weight(std::size_t mcw_index) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.learning_rates.size(); ++i) sum += at(i, mcw_index).gap();
  return sum / static_cast<double>(grid.learning_rates.size());
}

SweepResult overfit_sweep(const ModelSpec& base, const Dataset& train, const Dataset& validation,
                          const SweepGrid& grid, std::uint64_t seed) {
  require_labeled(train, "overfit_sweep");
  require_labeled(validation, "overfit_sweep");
  if (grid.learning_rates.empty() || grid.min_child_weights.empty()) {
    throw std::invalid_argument("overfit_sweep: grid must be nonempty");
  }
  SweepResult result{base.kind, grid, sweep_axis_mapping(base.kind), {}};
  const Matrix train_x = train.features();
  const Labels train_y = train.labels();
  const Matrix val_x = validation.features();
  const Labels val_y = validation.labels();

  for (double lr : grid.learning_rates) {
    for (double mcw : grid.min_child_weights) {
      const ModelSpec spec{base.kind, apply_sweep_axes(base.kind, base.hyperparameters, lr, mcw)};
      const auto model = fit_model(spec, train_x, train_y, seed);
      SweepCell cell{lr, mcw, 0.0, 0.0, 0.0, 0.0};
      cell.train_accuracy = compute_metrics(train_y, model->predict_class_batch(train_x)).accuracy;
      cell.validation_accuracy = compute_metrics(val_y, model->predict_class_batch(val_x)).accuracy;
      cell.train_log_loss = log_loss(train_y, model->predict_proba_batch(train_x));
      cell.validation_log_loss = log_loss(val_y, model->predict_proba_batch(val_x));
      result.cells.push_back(cell);
    }
  }
  return result;
}

ComparisonTable compare_models(std::span<const ModelKind> kinds, const Hyperparameters& hp, const Dataset& train,
                               const Dataset& test, std::uint64_t seed) {
  require_labeled(train, "compare_models");
  require_labeled(test, "compare_models");
  const Matrix train_x = train.features();
  const Labels train_y = train.labels();
  const Matrix test_x = test.features();
  const Labels test_y = test.labels();

  struct Entry {
    ComparisonRow row;
    ModelPtr model;
    std::size_t order;
  };
  std::vector<Entry> entries;
  std::vector<ModelPtr> trained_members;
  auto evaluate = [&](ModelKind kind, std::size_t order, const std::function<ModelPtr()>& train_fn) {
    Entry e{{kind, std::nullopt, {}}, nullptr, order};
    try {
      e.model = train_fn();
      e.row.metrics = compute_metrics(test_y, e.model->predict_class_batch(test_x));
    } catch (const std::exception& ex) {
      e.model = nullptr;
      e.row.error = ex.what();
    }
    entries.push_back(std::move(e));
  };

  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == ModelKind::voting) continue;
    evaluate(kinds[i], i, [&] { return ModelPtr(fit_model(ModelSpec{kinds[i], hp}, train_x, train_y, seed)); });
    if (entries.back().model) trained_members.push_back(entries.back().model);
  }
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] != ModelKind::voting) continue;
    evaluate(ModelKind::voting, i, [&] {
      if (!trained_members.empty()) return ModelPtr(make_voting_model(trained_members));
      return ModelPtr(fit_model(ModelSpec{ModelKind::voting, hp}, train_x, train_y, seed));
    });
  }

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.row.metrics.has_value() != b.row.metrics.has_value()) return a.row.metrics.has_value();
    if (a.row.metrics && a.row.metrics->accuracy != b.row.metrics->accuracy) {
      return a.row.metrics->accuracy > b.row.metrics->accuracy;
    }
    return a.order < b.order;
  });
  ComparisonTable table;
  for (auto& e : entries) {
    table.rows.push_back(std::move(e.row));
    table.models.push_back(std::move(e.model));
  }
  return table;
}

void write_comparison_csv(const ComparisonTable& table, std::ostream& out) {
  out << "model,accuracy,precision,recall,f1\n";
  for (const auto& row : table.rows) {
    out << model_kind_name(row.kind);
    if (row.metrics) {
      out << ',' << format_double(row.metrics->accuracy) << ',' << format_double(row.metrics->precision) << ','
          << format_double(row.metrics->recall) << ',' << format_double(row.metrics->f1) << '\n';
    } else {
      out << ",failed,failed,failed,failed\n";
    }
  }
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "learning_rate,min_child_weight,train_acc,val_acc,train_logloss,val_logloss\n";
  for (const auto& c : result.cells) {
    out << format_double(c.learning_rate) << ',' << format_double(c.min_child_weight) << ','
        << format_double(c.train_accuracy) << ',' << format_double(c.validation_accuracy) << ','
        << format_double(c.train_log_loss) << ',' << format_double(c.validation_log_loss) << '\n';
  }
}

void write_trace_csv(const TrainingTrace& trace, std::ostream& out) {
  out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const auto& r : trace) {
    out << r.epoch << ',' << format_double(r.train_loss) << ',' << format_double(r.train_accuracy) << ','
        << format_double(r.validation_loss) << ',' << format_double(r.validation_accuracy) << '\n';
  }
}

}  // namespace riskml
