#include "rtclass/forest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rtclass/rng.hpp"

namespace rtclass {

namespace {

int argmax_counts(const std::vector<int>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

double gini(const std::vector<int>& counts, int total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (int c : counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  int n_classes;
  int n_candidates;
  int max_depth;
  Rng& rng;
  DecisionTree tree;
  std::vector<int> feature_pool;

  TreeBuilder(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
              int n_classes, int n_candidates, int max_depth, Rng& rng)
      : x(x), y(y), n_classes(n_classes), n_candidates(n_candidates),
        max_depth(max_depth), rng(rng) {
    feature_pool.resize(x.front().size());
    for (std::size_t f = 0; f < feature_pool.size(); ++f)
      feature_pool[f] = static_cast<int>(f);
  }

  int build(std::vector<std::size_t>& samples, int depth) {
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i : samples) ++counts[static_cast<std::size_t>(y[i])];
    const int total = static_cast<int>(samples.size());

    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (pure || total < 2 || (max_depth > 0 && depth >= max_depth))
      return make_leaf(std::move(counts));

    // draw candidate features without replacement (partial Fisher-Yates)
    for (int c = 0; c < n_candidates; ++c) {
      const std::size_t j = c + rng.next_index(feature_pool.size() - static_cast<std::size_t>(c));
      std::swap(feature_pool[static_cast<std::size_t>(c)], feature_pool[j]);
    }

    const double parent_gini = gini(counts, total);
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_decrease = 0.0;

    std::vector<std::pair<double, int>> vals;
    vals.reserve(samples.size());
    std::vector<int> left_counts(static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_candidates; ++c) {
      const int f = feature_pool[static_cast<std::size_t>(c)];
      vals.clear();
      for (std::size_t i : samples) vals.emplace_back(x[i][static_cast<std::size_t>(f)], y[i]);
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::fill(left_counts.begin(), left_counts.end(), 0);
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left_counts[static_cast<std::size_t>(vals[i].second)];
        if (vals[i].first == vals[i + 1].first) continue;
        const int n_left = static_cast<int>(i + 1);
        const int n_right = total - n_left;
        double right_sq = 0.0, left_sq = 0.0;
        for (int cls = 0; cls < n_classes; ++cls) {
          const auto cu = static_cast<std::size_t>(cls);
          const double pl = static_cast<double>(left_counts[cu]) / n_left;
          const double pr = static_cast<double>(counts[cu] - left_counts[cu]) / n_right;
          left_sq += pl * pl;
          right_sq += pr * pr;
        }
        const double child =
            (static_cast<double>(n_left) * (1.0 - left_sq) +
             static_cast<double>(n_right) * (1.0 - right_sq)) / total;
        const double decrease = parent_gini - child;
        if (decrease > best_decrease) {
          best_decrease = decrease;
          best_feature = f;
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        }
      }
    }

    if (best_feature < 0) return make_leaf(std::move(counts));

    std::vector<std::size_t> left, right;
    for (std::size_t i : samples)
      (x[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right)
          .push_back(i);
    samples.clear();
    samples.shrink_to_fit();

    const int node = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[static_cast<std::size_t>(node)].feature = best_feature;
    tree.nodes[static_cast<std::size_t>(node)].threshold = best_threshold;
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    tree.nodes[static_cast<std::size_t>(node)].left = l;
    tree.nodes[static_cast<std::size_t>(node)].right = r;
    return node;
  }

  int make_leaf(std::vector<int>&& counts) {
    const int node = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[static_cast<std::size_t>(node)].counts = std::move(counts);
    return node;
  }
};

}  // namespace

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0)
    node = &nodes[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                      : node->right)];
  return *node;
}

int DecisionTree::predict(std::span<const double> x) const {
  return argmax_counts(leaf_for(x).counts);
}

std::size_t DecisionTree::leaf_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.feature < 0;
  return n;
}

std::size_t DecisionTree::internal_count() const { return nodes.size() - leaf_count(); }

int ForestModel::predict(std::span<const double> x) const {
  std::vector<int> votes(static_cast<std::size_t>(n_classes), 0);
  for (const auto& tree : trees) ++votes[static_cast<std::size_t>(tree.predict(x))];
  return argmax_counts(votes);
}

std::vector<int> ForestModel::predict(const std::vector<std::vector<double>>& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict(row));
  return out;
}

ForestModel train_forest(const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y, const ForestConfig& config,
                         std::uint64_t seed) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("train_forest: empty or mismatched inputs");
  const std::size_t d = x.front().size();
  int n_classes = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d) throw std::invalid_argument("train_forest: ragged matrix");
    for (double v : x[i])
      if (std::isnan(v)) throw std::invalid_argument("train_forest: NaN in features");
    if (y[i] < 0) throw std::invalid_argument("train_forest: negative label");
    n_classes = std::max(n_classes, y[i] + 1);
  }
  {
    std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
    for (int label : y) seen[static_cast<std::size_t>(label)] = true;
    if (std::count(seen.begin(), seen.end(), true) < 2)
      throw std::invalid_argument("train_forest: need at least 2 classes");
  }

  ForestModel model;
  model.n_features = static_cast<int>(d);
  model.n_classes = n_classes;
  model.config = config;
  model.seed = seed;
  const int n_candidates =
      config.features_per_split > 0
          ? std::min(config.features_per_split, static_cast<int>(d))
          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));

  model.trees.reserve(static_cast<std::size_t>(config.n_trees));
  for (int t = 0; t < config.n_trees; ++t) {
    Rng rng(derive_seed(seed, "tree/" + std::to_string(t)));
    std::vector<std::size_t> bootstrap(x.size());
    for (auto& i : bootstrap) i = rng.next_index(x.size());

    TreeBuilder builder(x, y, n_classes, n_candidates, config.max_depth, rng);
    builder.build(bootstrap, 0);
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

namespace {

void accumulate_importance(const DecisionTree& tree, int node_idx,
                           const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y, std::vector<std::size_t>& samples,
                           int n_classes, double n_total, std::vector<double>& imp) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_idx)];
  if (node.feature < 0 || samples.empty()) return;

  std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i : samples) ++counts[static_cast<std::size_t>(y[i])];
  const int total = static_cast<int>(samples.size());

  std::vector<std::size_t> left, right;
  for (std::size_t i : samples)
    (x[i][static_cast<std::size_t>(node.feature)] <= node.threshold ? left : right)
        .push_back(i);
  samples.clear();
  samples.shrink_to_fit();

  std::vector<int> lc(static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i : left) ++lc[static_cast<std::size_t>(y[i])];
  std::vector<int> rc(static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i : right) ++rc[static_cast<std::size_t>(y[i])];

  const double decrease =
      gini(counts, total) -
      (static_cast<double>(left.size()) * gini(lc, static_cast<int>(left.size())) +
       static_cast<double>(right.size()) * gini(rc, static_cast<int>(right.size()))) /
          total;
  imp[static_cast<std::size_t>(node.feature)] += (total / n_total) * decrease;

  accumulate_importance(tree, node.left, x, y, left, n_classes, n_total, imp);
  accumulate_importance(tree, node.right, x, y, right, n_classes, n_total, imp);
}

}  // namespace

std::vector<double> feature_importance(const ForestModel& forest,
                                       const std::vector<std::vector<double>>& x,
                                       const std::vector<int>& y) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("feature_importance: empty or mismatched inputs");
  std::vector<double> imp(static_cast<std::size_t>(forest.n_features), 0.0);
  for (const auto& tree : forest.trees) {
    std::vector<std::size_t> all(x.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    accumulate_importance(tree, 0, x, y, all, forest.n_classes,
                          static_cast<double>(x.size()), imp);
  }
  double total = 0.0;
  for (double v : imp) total += v;
  if (total > 0.0)
    for (double& v : imp) v /= total;
  return imp;
}

std::map<std::string, double> feature_importance_named(
    const ForestModel& forest, const std::vector<std::vector<double>>& x,
    const std::vector<int>& y, const std::vector<std::string>& names) {
  const auto imp = feature_importance(forest, x, y);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < imp.size() && i < names.size(); ++i) out[names[i]] = imp[i];
  return out;
}

}  // namespace rtclass
