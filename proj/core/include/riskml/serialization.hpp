#pragma once

// JSON converters for parameter and configuration types, found by nlohmann::json via ADL.

#include <nlohmann/json.hpp>

#include "riskml/knn.hpp"
#include "riskml/model.hpp"

namespace riskml {

void to_json(nlohmann::json& j, const Matrix& m);
void from_json(const nlohmann::json& j, Matrix& m);

void to_json(nlohmann::json& j, const Standardizer& s);
void from_json(const nlohmann::json& j, Standardizer& s);

void to_json(nlohmann::json& j, const TreeNode& n);
void from_json(const nlohmann::json& j, TreeNode& n);
void to_json(nlohmann::json& j, const Tree& t);
void from_json(const nlohmann::json& j, Tree& t);
void to_json(nlohmann::json& j, const RandomForest& f);
void from_json(const nlohmann::json& j, RandomForest& f);

void to_json(nlohmann::json& j, const LinearModelParams& p);
void from_json(const nlohmann::json& j, LinearModelParams& p);
void to_json(nlohmann::json& j, const GbtEnsemble& e);
void from_json(const nlohmann::json& j, GbtEnsemble& e);
void to_json(nlohmann::json& j, const AdaBoostEnsemble& e);
void from_json(const nlohmann::json& j, AdaBoostEnsemble& e);
void to_json(nlohmann::json& j, const OrderedTargetEncoder& e);
void from_json(const nlohmann::json& j, OrderedTargetEncoder& e);
void to_json(nlohmann::json& j, const CatBoostModel& m);
void from_json(const nlohmann::json& j, CatBoostModel& m);
void to_json(nlohmann::json& j, const DenseLayer& l);
void from_json(const nlohmann::json& j, DenseLayer& l);
void to_json(nlohmann::json& j, const MlpParams& p);
void from_json(const nlohmann::json& j, MlpParams& p);
void to_json(nlohmann::json& j, const KnnModel& m);
void from_json(const nlohmann::json& j, KnnModel& m);

void to_json(nlohmann::json& j, const GdConfig& c);
void from_json(const nlohmann::json& j, GdConfig& c);
void to_json(nlohmann::json& j, const TreeConfig& c);
void from_json(const nlohmann::json& j, TreeConfig& c);
void to_json(nlohmann::json& j, const ForestConfig& c);
void from_json(const nlohmann::json& j, ForestConfig& c);
void to_json(nlohmann::json& j, const GbtConfig& c);
void from_json(const nlohmann::json& j, GbtConfig& c);
void to_json(nlohmann::json& j, const AdaBoostConfig& c);
void from_json(const nlohmann::json& j, AdaBoostConfig& c);
void to_json(nlohmann::json& j, const CatBoostConfig& c);
void from_json(const nlohmann::json& j, CatBoostConfig& c);
void to_json(nlohmann::json& j, const MlpArchitecture& a);
void from_json(const nlohmann::json& j, MlpArchitecture& a);
void to_json(nlohmann::json& j, const MlpTrainConfig& c);
void from_json(const nlohmann::json& j, MlpTrainConfig& c);
void to_json(nlohmann::json& j, const Hyperparameters& h);
void from_json(const nlohmann::json& j, Hyperparameters& h);

void to_json(nlohmann::json& j, ModelKind kind);
void from_json(const nlohmann::json& j, ModelKind& kind);

}  // namespace riskml
