#include "riskml/serialization.hpp"

#include <string>

#include "riskml/errors.hpp"

namespace riskml {

using nlohmann::json;

void to_json(json& j, const Matrix& m) { j = json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", m.values()}}; }

void from_json(const json& j, Matrix& m) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != rows * cols) throw DataError("matrix shape does not match values");
  m = Matrix(rows, cols);
  m.values() = std::move(values);
}

void to_json(json& j, const Standardizer& s) { j = json{{"means", s.means()}, {"stddevs", s.stddevs()}}; }

void from_json(const json& j, Standardizer& s) {
  s = Standardizer(j.at("means").get<std::vector<double>>(), j.at("stddevs").get<std::vector<double>>());
}

void to_json(json& j, const TreeNode& n) {
  if (n.is_leaf()) {
    j = json{{"value", n.value}, {"counts", n.class_counts}};
  } else {
    j = json{{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}};
  }
}

void from_json(const json& j, TreeNode& n) {
  n = TreeNode{};
  if (j.contains("feature")) {
    n.feature = j.at("feature").get<int>();
    n.threshold = j.at("threshold").get<double>();
    n.left = j.at("left").get<std::int32_t>();
    n.right = j.at("right").get<std::int32_t>();
  } else {
    n.value = j.at("value").get<double>();
    n.class_counts = j.at("counts").get<std::array<double, 2>>();
  }
}

void to_json(json& j, const Tree& t) { j = json{{"feature_count", t.feature_count}, {"nodes", t.nodes}}; }

void from_json(const json& j, Tree& t) {
  t.feature_count = j.at("feature_count").get<std::size_t>();
  t.nodes = j.at("nodes").get<std::vector<TreeNode>>();
  const auto n = static_cast<std::int32_t>(t.nodes.size());
  if (t.nodes.empty()) throw DataError("tree has no nodes");
  for (std::int32_t i = 0; i < n; ++i) {
    const auto& node = t.nodes[static_cast<std::size_t>(i)];
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n ||
        static_cast<std::size_t>(node.feature) >= t.feature_count) {
      throw DataError("tree node links are inconsistent");
    }
  }
}

void to_json(json& j, const RandomForest& f) { j = json{{"trees", f.trees}}; }
void from_json(const json& j, RandomForest& f) { f.trees = j.at("trees").get<std::vector<Tree>>(); }

NLOHMANN_JSON_SERIALIZE_ENUM(LinearKind, {{LinearKind::logistic, "logistic"}, {LinearKind::svm, "svm"}})
NLOHMANN_JSON_SERIALIZE_ENUM(TreeGrowth, {{TreeGrowth::depth_wise, "depth_wise"}, {TreeGrowth::leaf_wise, "leaf_wise"}})

void to_json(json& j, const LinearModelParams& p) {
  j = json{{"kind", p.kind}, {"weights", p.weights}, {"bias", p.bias}};
  if (p.platt) j["platt"] = json{{"a", p.platt->a}, {"c", p.platt->c}};
}

void from_json(const json& j, LinearModelParams& p) {
  p.kind = j.at("kind").get<LinearKind>();
  p.weights = j.at("weights").get<std::vector<double>>();
  p.bias = j.at("bias").get<double>();
  p.platt.reset();
  if (j.contains("platt")) p.platt = PlattScaling{j["platt"].at("a").get<double>(), j["platt"].at("c").get<double>()};
}

void to_json(json& j, const GbtEnsemble& e) {
  j = json{{"base_score", e.base_score}, {"learning_rate", e.learning_rate}, {"trees", e.trees}};
}

void from_json(const json& j, GbtEnsemble& e) {
  e.base_score = j.at("base_score").get<double>();
  e.learning_rate = j.at("learning_rate").get<double>();
  e.trees = j.at("trees").get<std::vector<Tree>>();
}

void to_json(json& j, const AdaBoostEnsemble& e) { j = json{{"stumps", e.stumps}, {"alphas", e.alphas}}; }

void from_json(const json& j, AdaBoostEnsemble& e) {
  e.stumps = j.at("stumps").get<std::vector<Tree>>();
  e.alphas = j.at("alphas").get<std::vector<double>>();
  if (e.stumps.size() != e.alphas.size()) throw DataError("stump/alpha count mismatch");
}

void to_json(json& j, const OrderedTargetEncoder& e) {
  json stats = json::array();
  for (const auto& [category, s] : e.statistics()) stats.push_back(json::array({category, s.positives, s.count}));
  j = json{{"prior_weight", e.prior_weight()},
           {"global_rate", e.global_rate()},
           {"statistics", std::move(stats)},
           {"permutation", e.permutation()}};
}

void from_json(const json& j, OrderedTargetEncoder& e) {
  std::map<double, CategoryStatistics> stats;
  for (const auto& entry : j.at("statistics")) {
    stats[entry.at(0).get<double>()] = CategoryStatistics{entry.at(1).get<double>(), entry.at(2).get<double>()};
  }
  e = OrderedTargetEncoder(j.at("prior_weight").get<double>(), j.at("global_rate").get<double>(), std::move(stats),
                           j.at("permutation").get<std::vector<std::size_t>>());
}

void to_json(json& j, const CatBoostModel& m) {
  j = json{{"categorical_columns", m.categorical_columns}, {"encoders", m.encoders}, {"ensemble", m.ensemble}};
}

void from_json(const json& j, CatBoostModel& m) {
  m.categorical_columns = j.at("categorical_columns").get<std::vector<std::size_t>>();
  m.encoders = j.at("encoders").get<std::vector<OrderedTargetEncoder>>();
  m.ensemble = j.at("ensemble").get<GbtEnsemble>();
  if (m.encoders.size() != m.categorical_columns.size()) {
    throw DataError("encoder/column count mismatch");
  }
}

void to_json(json& j, const DenseLayer& l) { j = json{{"weights", l.weights}, {"bias", l.bias}}; }

void from_json(const json& j, DenseLayer& l) {
  l.weights = j.at("weights").get<Matrix>();
  l.bias = j.at("bias").get<std::vector<double>>();
  if (l.bias.size() != l.weights.rows()) throw DataError("layer bias size mismatch");
}

void to_json(json& j, const MlpParams& p) { j = json{{"layers", p.layers}}; }

void from_json(const json& j, MlpParams& p) {
  p.layers = j.at("layers").get<std::vector<DenseLayer>>();
  for (std::size_t l = 1; l < p.layers.size(); ++l) {
    if (p.layers[l].weights.cols() != p.layers[l - 1].weights.rows()) {
      throw DataError("layer shapes do not chain");
    }
  }
}

void to_json(json& j, const KnnModel& m) { j = json{{"k", m.k}, {"points", m.points}, {"labels", m.labels}}; }

void from_json(const json& j, KnnModel& m) {
  m.k = j.at("k").get<std::size_t>();
  m.points = j.at("points").get<Matrix>();
  m.labels = j.at("labels").get<Labels>();
  if (m.labels.size() != m.points.rows()) throw DataError("knn label count mismatch");
}

void to_json(json& j, const GdConfig& c) {
  j = json{{"learning_rate", c.learning_rate}, {"epochs", c.epochs},       {"l2_lambda", c.l2_lambda},
           {"tolerance", c.tolerance},         {"fit_intercept", c.fit_intercept}, {"seed", c.seed}};
}

void from_json(const json& j, GdConfig& c) {
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("epochs").get_to(c.epochs);
  j.at("l2_lambda").get_to(c.l2_lambda);
  j.at("tolerance").get_to(c.tolerance);
  j.at("fit_intercept").get_to(c.fit_intercept);
  j.at("seed").get_to(c.seed);
}

void to_json(json& j, const TreeConfig& c) {
  j = json{{"max_depth", c.max_depth}, {"min_samples_leaf", c.min_samples_leaf}, {"min_samples_split", c.min_samples_split}};
}

void from_json(const json& j, TreeConfig& c) {
  j.at("max_depth").get_to(c.max_depth);
  j.at("min_samples_leaf").get_to(c.min_samples_leaf);
  j.at("min_samples_split").get_to(c.min_samples_split);
}

void to_json(json& j, const ForestConfig& c) {
  j = json{{"n_trees", c.n_trees}, {"features_per_split", c.features_per_split}, {"bootstrap", c.bootstrap},
           {"tree", c.tree},       {"seed", c.seed}};
}

void from_json(const json& j, ForestConfig& c) {
  j.at("n_trees").get_to(c.n_trees);
  j.at("features_per_split").get_to(c.features_per_split);
  j.at("bootstrap").get_to(c.bootstrap);
  j.at("tree").get_to(c.tree);
  j.at("seed").get_to(c.seed);
}

void to_json(json& j, const GbtConfig& c) {
  j = json{{"n_rounds", c.n_rounds},   {"learning_rate", c.learning_rate}, {"min_child_weight", c.min_child_weight},
           {"l2_lambda", c.l2_lambda}, {"gamma", c.gamma},                 {"growth", c.growth},
           {"max_depth", c.max_depth}, {"max_leaves", c.max_leaves},       {"seed", c.seed}};
}

void from_json(const json& j, GbtConfig& c) {
  j.at("n_rounds").get_to(c.n_rounds);
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("min_child_weight").get_to(c.min_child_weight);
  j.at("l2_lambda").get_to(c.l2_lambda);
  j.at("gamma").get_to(c.gamma);
  j.at("growth").get_to(c.growth);
  j.at("max_depth").get_to(c.max_depth);
  j.at("max_leaves").get_to(c.max_leaves);
  j.at("seed").get_to(c.seed);
}

void to_json(json& j, const AdaBoostConfig& c) {
  j = json{{"n_rounds", c.n_rounds}, {"learning_rate", c.learning_rate}, {"min_samples_leaf", c.min_samples_leaf}};
}

void from_json(const json& j, AdaBoostConfig& c) {
  j.at("n_rounds").get_to(c.n_rounds);
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("min_samples_leaf").get_to(c.min_samples_leaf);
}

void to_json(json& j, const CatBoostConfig& c) {
  j = json{{"gbt", c.gbt}, {"prior_weight", c.prior_weight}, {"categorical_columns", c.categorical_columns}};
}

void from_json(const json& j, CatBoostConfig& c) {
  j.at("gbt").get_to(c.gbt);
  j.at("prior_weight").get_to(c.prior_weight);
  j.at("categorical_columns").get_to(c.categorical_columns);
}

void to_json(json& j, const MlpArchitecture& a) { j = json{{"layer_sizes", a.layer_sizes}}; }
void from_json(const json& j, MlpArchitecture& a) { j.at("layer_sizes").get_to(a.layer_sizes); }

void to_json(json& j, const MlpTrainConfig& c) {
  j = json{{"epochs", c.epochs},
           {"batch_size", c.batch_size},
           {"step", c.adam.step},
           {"beta1", c.adam.beta1},
           {"beta2", c.adam.beta2},
           {"epsilon", c.adam.epsilon},
           {"seed", c.seed}};
}

void from_json(const json& j, MlpTrainConfig& c) {
  j.at("epochs").get_to(c.epochs);
  j.at("batch_size").get_to(c.batch_size);
  j.at("step").get_to(c.adam.step);
  j.at("beta1").get_to(c.adam.beta1);
  j.at("beta2").get_to(c.adam.beta2);
  j.at("epsilon").get_to(c.adam.epsilon);
  j.at("seed").get_to(c.seed);
}

void to_json(json& j, ModelKind kind) { j = std::string(model_kind_name(kind)); }

void from_json(const json& j, ModelKind& kind) {
  try {
    kind = parse_model_kind(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

void to_json(json& j, const Hyperparameters& h) {
  j = json{{"logistic", h.logistic},
           {"svm", h.svm},
           {"tree", h.tree},
           {"forest", h.forest},
           {"gbt_depthwise", h.gbt_depthwise},
           {"gbt_leafwise", h.gbt_leafwise},
           {"adaboost", h.adaboost},
           {"catboost", h.catboost},
           {"knn_k", h.knn_k},
           {"mlp_architecture", h.mlp_architecture},
           {"mlp", h.mlp},
           {"voting_members", h.voting_members}};
}

void from_json(const json& j, Hyperparameters& h) {
  j.at("logistic").get_to(h.logistic);
  j.at("svm").get_to(h.svm);
  j.at("tree").get_to(h.tree);
  j.at("forest").get_to(h.forest);
  j.at("gbt_depthwise").get_to(h.gbt_depthwise);
  j.at("gbt_leafwise").get_to(h.gbt_leafwise);
  j.at("adaboost").get_to(h.adaboost);
  j.at("catboost").get_to(h.catboost);
  j.at("knn_k").get_to(h.knn_k);
  j.at("mlp_architecture").get_to(h.mlp_architecture);
  j.at("mlp").get_to(h.mlp);
  j.at("voting_members").get_to(h.voting_members);
}

}  // namespace riskml
