#include "riskml/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "riskml/errors.hpp"
#include "riskml/linear.hpp"

namespace riskml {

void GbtConfig::validate() const {
  if (n_rounds < 0) throw std::invalid_argument("GbtConfig: n_rounds must be >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw std::invalid_argument("GbtConfig: learning_rate must lie in (0, 1]");
  }
  if (!(min_child_weight >= 0.0)) throw std::invalid_argument("GbtConfig: min_child_weight must be >= 0");
  if (!(l2_lambda >= 0.0)) throw std::invalid_argument("GbtConfig: l2_lambda must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("GbtConfig: gamma must be >= 0");
  if (growth == TreeGrowth::depth_wise && max_depth < 1) {
    throw std::invalid_argument("GbtConfig: max_depth must be >= 1");
  }
  if (growth == TreeGrowth::leaf_wise && max_leaves < 2) {
    throw std::invalid_argument("GbtConfig: max_leaves must be >= 2");
  }
}

GradHess logistic_grad_hess(int y, double margin) noexcept {
  const double p = sigmoid(margin);
  return {p - static_cast<double>(y), std::max(p * (1.0 - p), kMinHessian)};
}

double gbt_split_gain(double g_left, double h_left, double g_right, double h_right, double l2_lambda,
                      double gamma) noexcept {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + l2_lambda) + g_right * g_right / (h_right + l2_lambda) -
                g * g / (h + l2_lambda)) -
         gamma;
}

bool gbt_split_accepted(double gain, double h_left, double h_right, double min_child_weight) noexcept {
  return gain > 0.0 && h_left >= min_child_weight && h_right >= min_child_weight;
}

double gbt_leaf_value(double g_sum, double h_sum, double l2_lambda) noexcept { return -g_sum / (h_sum + l2_lambda); }

PresortedColumns::PresortedColumns(const Matrix& x) : orders_(x.cols()) {
  if (x.rows() > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("PresortedColumns: too many rows");
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto& order = orders_[c];
    order.resize(x.rows());
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, c) < x(b, c); });
  }
}

namespace {

constexpr std::uint32_t kFinished = std::numeric_limits<std::uint32_t>::max();

struct NodeSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
  double g_left = 0.0;
  double h_left = 0.0;
};

struct NodeState {
  double g = 0.0;
  double h = 0.0;
  int depth = 0;
  std::optional<NodeSplit> best;
};

// Grows a regression tree with exact greedy search over presorted columns. A single
// pass over every column evaluates all currently active nodes at once.
class GradientTreeBuilder {
 public:
  GradientTreeBuilder(const Matrix& x, const PresortedColumns& presorted, std::span<const GradHess> stats,
                      const GbtConfig& config)
      : x_(x), presorted_(presorted), stats_(stats), config_(config), node_of_(x.rows(), 0) {}

  Tree build() {
    tree_.feature_count = x_.cols();
    tree_.nodes.emplace_back();
    NodeState root;
    for (const auto& s : stats_) {
      root.g += s.gradient;
      root.h += s.hessian;
    }
    states_.push_back(root);
    if (config_.growth == TreeGrowth::depth_wise) {
      grow_depth_wise();
    } else {
      grow_leaf_wise();
    }
    for (std::size_t i = 0; i < tree_.nodes.size(); ++i) {
      if (tree_.nodes[i].is_leaf()) tree_.nodes[i].value = gbt_leaf_value(states_[i].g, states_[i].h, config_.l2_lambda);
    }
    return std::move(tree_);
  }

 private:
  void grow_depth_wise() {
    std::vector<std::uint32_t> level{0};
    for (int depth = 0; depth < config_.max_depth && !level.empty(); ++depth) {
      evaluate(level);
      std::vector<std::uint32_t> next;
      std::vector<std::uint32_t> finished;
      for (auto id : level) {
        if (states_[id].best) {
          const auto [l, r] = split(id);
          next.push_back(l);
          next.push_back(r);
        } else {
          finished.push_back(id);
        }
      }
      route_rows();
      retire(finished);
      level = std::move(next);
    }
  }

  void grow_leaf_wise() {
    std::vector<std::uint32_t> frontier{0};
    evaluate(frontier);
    std::size_t leaves = 1;
    while (leaves < static_cast<std::size_t>(config_.max_leaves)) {
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        const auto& cand = states_[frontier[i]].best;
        if (!cand) continue;
        if (!pick || cand->gain > states_[frontier[*pick]].best->gain + kGainTieTolerance) pick = i;
      }
      if (!pick) break;
      const auto id = frontier[*pick];
      frontier.erase(frontier.begin() + static_cast<long>(*pick));
      const auto [l, r] = split(id);
      route_rows();
      const std::vector<std::uint32_t> children{l, r};
      evaluate(children);
      frontier.push_back(l);
      frontier.push_back(r);
      ++leaves;
    }
  }

  // Best admissible split for every node in `nodes`, written to states_[id].best.
  void evaluate(std::span<const std::uint32_t> nodes) {
    const auto count = states_.size();
    std::vector<char> active(count, 0);
    for (auto id : nodes) {
      active[id] = 1;
      states_[id].best.reset();
    }
    std::vector<double> g_left(count), h_left(count), last(count);
    std::vector<char> seen(count);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::fill(g_left.begin(), g_left.end(), 0.0);
      std::fill(h_left.begin(), h_left.end(), 0.0);
      std::fill(seen.begin(), seen.end(), 0);
      for (auto row : presorted_.order(f)) {
        const auto id = node_of_[row];
        if (id == kFinished || !active[id]) continue;
        const double value = x_(row, f);
        if (seen[id] && value > last[id]) consider(id, f, last[id], value, g_left[id], h_left[id]);
        g_left[id] += stats_[row].gradient;
        h_left[id] += stats_[row].hessian;
        last[id] = value;
        seen[id] = 1;
      }
    }
  }

  void consider(std::uint32_t id, std::size_t feature, double below, double above, double g_left, double h_left) {
    auto& state = states_[id];
    const double g_right = state.g - g_left;
    const double h_right = state.h - h_left;
    const double gain = gbt_split_gain(g_left, h_left, g_right, h_right, config_.l2_lambda, config_.gamma);
    if (!gbt_split_accepted(gain, h_left, h_right, config_.min_child_weight)) return;
    if (state.best && !(gain > state.best->gain + kGainTieTolerance)) return;
    double threshold = 0.5 * (below + above);
    if (!(threshold > below)) threshold = above;
    state.best = NodeSplit{feature, threshold, gain, g_left, h_left};
  }

  std::pair<std::uint32_t, std::uint32_t> split(std::uint32_t id) {
    const NodeSplit s = *states_[id].best;
    const auto left = static_cast<std::uint32_t>(tree_.nodes.size());
    const auto right = left + 1;
    tree_.nodes.emplace_back();
    tree_.nodes.emplace_back();
    auto& node = tree_.nodes[id];
    node.feature = static_cast<int>(s.feature);
    node.threshold = s.threshold;
    node.left = static_cast<std::int32_t>(left);
    node.right = static_cast<std::int32_t>(right);

    const NodeState parent = states_[id];
    states_.push_back({s.g_left, s.h_left, parent.depth + 1, std::nullopt});
    states_.push_back({parent.g - s.g_left, parent.h - s.h_left, parent.depth + 1, std::nullopt});
    states_[id].best.reset();
    return {left, right};
  }

  // Moves every row sitting on a node that has since been split down to its child.
  void route_rows() {
    for (std::size_t row = 0; row < node_of_.size(); ++row) {
      const auto id = node_of_[row];
      if (id == kFinished) continue;
      const auto& node = tree_.nodes[id];
      if (node.is_leaf()) continue;
      const auto child = x_(row, static_cast<std::size_t>(node.feature)) < node.threshold ? node.left : node.right;
      node_of_[row] = static_cast<std::uint32_t>(child);
    }
  }

  void retire(std::span<const std::uint32_t> nodes) {
    if (nodes.empty()) return;
    std::vector<char> done(states_.size(), 0);
    for (auto id : nodes) done[id] = 1;
    for (auto& n : node_of_) {
      if (n != kFinished && done[n]) n = kFinished;
    }
  }

  const Matrix& x_;
  const PresortedColumns& presorted_;
  std::span<const GradHess> stats_;
  const GbtConfig& config_;
  std::vector<std::uint32_t> node_of_;
  std::vector<NodeState> states_;
  Tree tree_;
};

double mean_log_loss(std::span<const double> margins, std::span<const int> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) loss += logit_cross_entropy(margins[i], y[i]);
  return loss / static_cast<double>(margins.size());
}

}  // namespace

Tree fit_gradient_tree(const Matrix& x, const PresortedColumns& presorted, std::span<const GradHess> stats,
                       const GbtConfig& config) {
  config.validate();
  if (x.empty()) throw std::invalid_argument("fit_gradient_tree: empty training set");
  if (stats.size() != x.rows()) throw std::invalid_argument("fit_gradient_tree: gradient count mismatch");
  if (presorted.columns() != x.cols()) throw std::invalid_argument("fit_gradient_tree: presorted columns mismatch");
  return GradientTreeBuilder(x, presorted, stats, config).build();
}

Tree fit_gradient_tree(const Matrix& x, std::span<const GradHess> stats, const GbtConfig& config) {
  const PresortedColumns presorted(x);
  return fit_gradient_tree(x, presorted, stats, config);
}

double gbt_margin(const GbtEnsemble& ensemble, std::span<const double> x) {
  double sum = 0.0;
  for (const auto& t : ensemble.trees) sum += predict_tree(t, x);
  return ensemble.base_score + ensemble.learning_rate * sum;
}

double gbt_predict_proba(const GbtEnsemble& ensemble, std::span<const double> x) {
  return sigmoid(gbt_margin(ensemble, x));
}

GbtEnsemble train_gbt(const Matrix& x, std::span<const int> y, const GbtConfig& config,
                      std::vector<double>* log_loss_history) {
  config.validate();
  if (x.empty()) throw std::invalid_argument("train_gbt: empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument("train_gbt: label count mismatch");

  const double positives = static_cast<double>(std::accumulate(y.begin(), y.end(), 0));
  const double rate = std::clamp(positives / static_cast<double>(y.size()), 1e-15, 1.0 - 1e-15);
  GbtEnsemble ensemble;
  ensemble.base_score = std::log(rate / (1.0 - rate));
  ensemble.learning_rate = config.learning_rate;
  ensemble.trees.reserve(static_cast<std::size_t>(config.n_rounds));

  std::vector<double> margins(x.rows(), ensemble.base_score);
  if (log_loss_history) log_loss_history->assign(1, mean_log_loss(margins, y));
  if (config.n_rounds == 0) return ensemble;

  const PresortedColumns presorted(x);
  std::vector<GradHess> stats(x.rows());
  for (int round = 0; round < config.n_rounds; ++round) {
    for (std::size_t i = 0; i < x.rows(); ++i) stats[i] = logistic_grad_hess(y[i], margins[i]);
    Tree tree = GradientTreeBuilder(x, presorted, stats, config).build();
    for (std::size_t i = 0; i < x.rows(); ++i) margins[i] += config.learning_rate * tree.predict(x.row(i));
    ensemble.trees.push_back(std::move(tree));
    if (log_loss_history) log_loss_history->push_back(mean_log_loss(margins, y));
  }
  for (double m : margins) {
    if (!std::isfinite(m)) throw NumericError("train_gbt: margins diverged");
  }
  return ensemble;
}

}  // namespace riskml
