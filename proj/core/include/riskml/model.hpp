#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "riskml/adaboost.hpp"
#include "riskml/gbt.hpp"
#include "riskml/linear.hpp"
#include "riskml/matrix.hpp"
#include "riskml/mlp.hpp"
#include "riskml/ordered_encoding.hpp"
#include "riskml/standardizer.hpp"
#include "riskml/tree.hpp"

namespace riskml {

enum class ModelKind {
  logistic,
  svm,
  tree,
  forest,
  gbt_depthwise,
  gbt_leafwise,
  adaboost,
  catboost,
  knn,
  mlp,
  voting,
};

inline constexpr std::array<ModelKind, 11> kAllModelKinds = {
    ModelKind::logistic,      ModelKind::svm,          ModelKind::tree,     ModelKind::forest,
    ModelKind::gbt_depthwise, ModelKind::gbt_leafwise, ModelKind::adaboost, ModelKind::catboost,
    ModelKind::knn,           ModelKind::mlp,          ModelKind::voting};

/// CLI names: logistic, svm, tree, forest, gbt-depthwise, gbt-leafwise, adaboost, catboost, knn, mlp, voting.
std::string_view model_kind_name(ModelKind kind) noexcept;
/// Throws std::invalid_argument for an unknown name.
ModelKind parse_model_kind(std::string_view name);

/// Per-family training settings. fit_model overrides every seed with its master seed.
struct Hyperparameters {
  GdConfig logistic{};
  GdConfig svm{};
  TreeConfig tree{};
  ForestConfig forest{};
  GbtConfig gbt_depthwise{};
  GbtConfig gbt_leafwise{.growth = TreeGrowth::leaf_wise};
  AdaBoostConfig adaboost{};
  CatBoostConfig catboost{};
  std::size_t knn_k = 5;
  MlpArchitecture mlp_architecture{};
  MlpTrainConfig mlp{};
  std::vector<ModelKind> voting_members{ModelKind::logistic,      ModelKind::svm,          ModelKind::tree,
                                        ModelKind::forest,        ModelKind::gbt_depthwise, ModelKind::gbt_leafwise,
                                        ModelKind::adaboost,      ModelKind::catboost,     ModelKind::knn,
                                        ModelKind::mlp};
};

struct ModelSpec {
  ModelKind kind = ModelKind::logistic;
  Hyperparameters hyperparameters{};
};

/// A trained binary classifier. Inputs are raw features in canonical order; every model
/// applies its own training-set standardization internally.
class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const noexcept = 0;
  /// Probability of infection.
  virtual double predict_proba(std::span<const double> features) const = 0;
  /// Reported class; probability >= 0.5 unless the family defines its own rule.
  virtual int predict_class(std::span<const double> features) const;
  /// Learned parameters, standardizer included.
  virtual nlohmann::json to_json() const = 0;

  std::vector<double> predict_proba_batch(const Matrix& features) const;
  std::vector<int> predict_class_batch(const Matrix& features) const;
};

using ModelPtr = std::shared_ptr<const Model>;

/// Optional extras for fit_model. The MLP records a training trace against the
/// validation rows when both are supplied; no family uses them for fitting decisions.
struct FitContext {
  const Matrix* validation_features = nullptr;
  const Labels* validation_labels = nullptr;
  TrainingTrace* trace = nullptr;
};

std::unique_ptr<Model> fit_model(const ModelSpec& spec, const Matrix& features, std::span<const int> labels,
                                 std::uint64_t seed, const FitContext& context = {});

/// Rebuilds a model from Model::to_json output. Throws DataError on malformed input.
std::unique_ptr<Model> model_from_json(const nlohmann::json& json);

/// Unweighted mean of member probabilities.
double voting_predict(std::span<const ModelPtr> members, std::span<const double> features);

/// Soft-voting ensemble over already trained members.
std::unique_ptr<Model> make_voting_model(std::vector<ModelPtr> members);

}  // namespace riskml
