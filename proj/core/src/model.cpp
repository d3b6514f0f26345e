#include "riskml/model.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "riskml/errors.hpp"
#include "riskml/knn.hpp"
#include "riskml/serialization.hpp"

namespace riskml {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 11> kKindNames = {
    "logistic", "svm", "tree", "forest", "gbt-depthwise", "gbt-leafwise", "adaboost", "catboost", "knn", "mlp", "voting"};

// Standardizes raw features before delegating to the family's predictor.
class StandardizedModel : public Model {
 public:
  explicit StandardizedModel(Standardizer standardizer) : standardizer_(std::move(standardizer)) {}

  double predict_proba(std::span<const double> features) const final {
    return predict_standardized(standardize(features));
  }

  int predict_class(std::span<const double> features) const override {
    return class_standardized(standardize(features));
  }

  json to_json() const final {
    return json{{"kind", kind()}, {"standardizer", standardizer_}, {"params", params_json()}};
  }

 protected:
  virtual double predict_standardized(std::span<const double> x) const = 0;
  virtual int class_standardized(std::span<const double> x) const { return predict_standardized(x) >= 0.5 ? 1 : 0; }
  virtual json params_json() const = 0;

 private:
  std::vector<double> standardize(std::span<const double> features) const {
    return standardizer_.transform_row(features);
  }

  Standardizer standardizer_;
};

class LinearModel final : public StandardizedModel {
 public:
  LinearModel(Standardizer s, LinearModelParams p) : StandardizedModel(std::move(s)), params_(std::move(p)) {}
  ModelKind kind() const noexcept override {
    return params_.kind == LinearKind::logistic ? ModelKind::logistic : ModelKind::svm;
  }

 protected:
  double predict_standardized(std::span<const double> x) const override { return linear_predict_proba(params_, x); }
  json params_json() const override { return params_; }

 private:
  LinearModelParams params_;
};

class TreeModel final : public StandardizedModel {
 public:
  TreeModel(Standardizer s, Tree t) : StandardizedModel(std::move(s)), tree_(std::move(t)) {}
  ModelKind kind() const noexcept override { return ModelKind::tree; }

 protected:
  double predict_standardized(std::span<const double> x) const override { return predict_tree(tree_, x); }
  json params_json() const override { return tree_; }

 private:
  Tree tree_;
};

class ForestModel final : public StandardizedModel {
 public:
  ForestModel(Standardizer s, RandomForest f) : StandardizedModel(std::move(s)), forest_(std::move(f)) {}
  ModelKind kind() const noexcept override { return ModelKind::forest; }

 protected:
  double predict_standardized(std::span<const double> x) const override { return predict_forest(forest_, x); }
  int class_standardized(std::span<const double> x) const override { return forest_vote(forest_, x); }
  json params_json() const override { return forest_; }

 private:
  RandomForest forest_;
};

class GbtModel final : public StandardizedModel {
 public:
  GbtModel(Standardizer s, ModelKind kind, GbtEnsemble e)
      : StandardizedModel(std::move(s)), kind_(kind), ensemble_(std::move(e)) {}
  ModelKind kind() const noexcept override { return kind_; }

 protected:
  double predict_standardized(std::span<const double> x) const override { return gbt_predict_proba(ensemble_, x); }
  json params_json() const override { return ensemble_; }

 private:
  ModelKind kind_;
  GbtEnsemble ensemble_;
};

class AdaBoostModel final : public StandardizedModel {
 public:
  AdaBoostModel(Standardizer s, AdaBoostEnsemble e) : StandardizedModel(std::move(s)), ensemble_(std::move(e)) {}
  ModelKind kind() const noexcept override { return ModelKind::adaboost; }

 protected:
  double predict_standardized(std::span<const double> x) const override {
    return adaboost_predict_proba(ensemble_, x);
  }
  int class_standardized(std::span<const double> x) const override { return adaboost_class(ensemble_, x); }
  json params_json() const override { return ensemble_; }

 private:
  AdaBoostEnsemble ensemble_;
};

class CatBoostWrapper final : public StandardizedModel {
 public:
  CatBoostWrapper(Standardizer s, CatBoostModel m) : StandardizedModel(std::move(s)), model_(std::move(m)) {}
  ModelKind kind() const noexcept override { return ModelKind::catboost; }

 protected:
  double predict_standardized(std::span<const double> x) const override { return catboost_predict_proba(model_, x); }
  json params_json() const override { return model_; }

 private:
  CatBoostModel model_;
};

class KnnWrapper final : public StandardizedModel {
 public:
  KnnWrapper(Standardizer s, KnnModel m) : StandardizedModel(std::move(s)), model_(std::move(m)) {}
  ModelKind kind() const noexcept override { return ModelKind::knn; }

 protected:
  double predict_standardized(std::span<const double> x) const override { return knn_predict_proba(model_, x); }
  json params_json() const override { return model_; }

 private:
  KnnModel model_;
};

class MlpModel final : public StandardizedModel {
 public:
  MlpModel(Standardizer s, MlpParams p) : StandardizedModel(std::move(s)), params_(std::move(p)) {}
  ModelKind kind() const noexcept override { return ModelKind::mlp; }

 protected:
  double predict_standardized(std::span<const double> x) const override { return mlp_predict_proba(params_, x); }
  json params_json() const override { return params_; }

 private:
  MlpParams params_;
};

class VotingModel final : public Model {
 public:
  explicit VotingModel(std::vector<ModelPtr> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("voting: no member models");
  }
  ModelKind kind() const noexcept override { return ModelKind::voting; }
  double predict_proba(std::span<const double> features) const override { return voting_predict(members_, features); }
  json to_json() const override {
    json members = json::array();
    for (const auto& m : members_) members.push_back(m->to_json());
    return json{{"kind", kind()}, {"members", std::move(members)}};
  }

 private:
  std::vector<ModelPtr> members_;
};

}  // namespace

std::string_view model_kind_name(ModelKind kind) noexcept { return kKindNames[static_cast<std::size_t>(kind)]; }

ModelKind parse_model_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ModelKind>(i);
  }
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

int Model::predict_class(std::span<const double> features) const { return predict_proba(features) >= 0.5 ? 1 : 0; }

std::vector<double> Model::predict_proba_batch(const Matrix& features) const {
  std::vector<double> out;
  out.reserve(features.rows());
  for (std::size_t r = 0; r < features.rows(); ++r) out.push_back(predict_proba(features.row(r)));
  return out;
}

std::vector<int> Model::predict_class_batch(const Matrix& features) const {
  std::vector<int> out;
  out.reserve(features.rows());
  for (std::size_t r = 0; r < features.rows(); ++r) out.push_back(predict_class(features.row(r)));
  return out;
}

double voting_predict(std::span<const ModelPtr> members, std::span<const double> features) {
  if (members.empty()) throw std::invalid_argument("voting_predict: no member models");
  double sum = 0.0;
  for (const auto& m : members) sum += m->predict_proba(features);
  return sum / static_cast<double>(members.size());
}

std::unique_ptr<Model> make_voting_model(std::vector<ModelPtr> members) {
  return std::make_unique<VotingModel>(std::move(members));
}

std::unique_ptr<Model> fit_model(const ModelSpec& spec, const Matrix& features, std::span<const int> labels,
                                 std::uint64_t seed, const FitContext& context) {
  if (features.empty()) throw std::invalid_argument("fit_model: empty training set");
  if (features.rows() != labels.size()) throw std::invalid_argument("fit_model: label count mismatch");
  const auto& hp = spec.hyperparameters;

  if (spec.kind == ModelKind::voting) {
    std::vector<ModelPtr> members;
    for (auto member : hp.voting_members) {
      if (member == ModelKind::voting) throw std::invalid_argument("voting: members cannot be voting models");
      members.push_back(fit_model(ModelSpec{member, hp}, features, labels, seed));
    }
    return make_voting_model(std::move(members));
  }

  Standardizer standardizer = Standardizer::fit(features);
  const Matrix x = standardizer.transform(features);
  switch (spec.kind) {
    case ModelKind::logistic: {
      auto config = hp.logistic;
      config.seed = seed;
      return std::make_unique<LinearModel>(std::move(standardizer), train_logistic(x, labels, config));
    }
    case ModelKind::svm: {
      auto config = hp.svm;
      config.seed = seed;
      return std::make_unique<LinearModel>(std::move(standardizer), train_linear_svm(x, labels, config));
    }
    case ModelKind::tree:
      return std::make_unique<TreeModel>(std::move(standardizer), train_decision_tree(x, labels, hp.tree));
    case ModelKind::forest: {
      auto config = hp.forest;
      config.seed = seed;
      return std::make_unique<ForestModel>(std::move(standardizer), train_random_forest(x, labels, config));
    }
    case ModelKind::gbt_depthwise:
    case ModelKind::gbt_leafwise: {
      auto config = spec.kind == ModelKind::gbt_depthwise ? hp.gbt_depthwise : hp.gbt_leafwise;
      config.seed = seed;
      return std::make_unique<GbtModel>(std::move(standardizer), spec.kind, train_gbt(x, labels, config));
    }
    case ModelKind::adaboost:
      return std::make_unique<AdaBoostModel>(std::move(standardizer), train_adaboost(x, labels, hp.adaboost));
    case ModelKind::catboost: {
      auto config = hp.catboost;
      config.gbt.seed = seed;
      return std::make_unique<CatBoostWrapper>(std::move(standardizer), train_catboost(x, labels, config));
    }
    case ModelKind::knn:
      return std::make_unique<KnnWrapper>(std::move(standardizer),
                                          make_knn(x, Labels(labels.begin(), labels.end()), hp.knn_k));
    case ModelKind::mlp: {
      auto config = hp.mlp;
      config.seed = seed;
      Matrix val_x;
      Labels val_y;
      if (context.validation_features && context.validation_labels) {
        val_x = standardizer.transform(*context.validation_features);
        val_y = *context.validation_labels;
      }
      auto result = train_mlp(x, labels, val_x, val_y, hp.mlp_architecture, config);
      if (context.trace) *context.trace = std::move(result.trace);
      return std::make_unique<MlpModel>(std::move(standardizer), std::move(result.params));
    }
    case ModelKind::voting:
      break;
  }
  throw std::logic_error("fit_model: unhandled model kind");
}

std::unique_ptr<Model> model_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<ModelKind>();
    if (kind == ModelKind::voting) {
      std::vector<ModelPtr> members;
      for (const auto& m : j.at("members")) members.push_back(model_from_json(m));
      return make_voting_model(std::move(members));
    }
    auto standardizer = j.at("standardizer").get<Standardizer>();
    const auto& p = j.at("params");
    switch (kind) {
      case ModelKind::logistic:
      case ModelKind::svm: {
        auto params = p.get<LinearModelParams>();
        if ((params.kind == LinearKind::logistic) != (kind == ModelKind::logistic)) {
          throw DataError("linear model kind does not match its tag");
        }
        return std::make_unique<LinearModel>(std::move(standardizer), std::move(params));
      }
      case ModelKind::tree:
        return std::make_unique<TreeModel>(std::move(standardizer), p.get<Tree>());
      case ModelKind::forest:
        return std::make_unique<ForestModel>(std::move(standardizer), p.get<RandomForest>());
      case ModelKind::gbt_depthwise:
      case ModelKind::gbt_leafwise:
        return std::make_unique<GbtModel>(std::move(standardizer), kind, p.get<GbtEnsemble>());
      case ModelKind::adaboost:
        return std::make_unique<AdaBoostModel>(std::move(standardizer), p.get<AdaBoostEnsemble>());
      case ModelKind::catboost:
        return std::make_unique<CatBoostWrapper>(std::move(standardizer), p.get<CatBoostModel>());
      case ModelKind::knn:
        return std::make_unique<KnnWrapper>(std::move(standardizer), p.get<KnnModel>());
      case ModelKind::mlp:
        return std::make_unique<MlpModel>(std::move(standardizer), p.get<MlpParams>());
      case ModelKind::voting:
        break;
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model parameters: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model parameters: ") + e.what());
  }
  throw DataError("unsupported model kind");
}

}  // namespace riskml
