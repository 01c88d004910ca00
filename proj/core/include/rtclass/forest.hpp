#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rtclass {

/// Binary decision tree stored as a flat node array; nodes[0] is the root.
/// Internal nodes route x[feature] <= threshold to the left child. Leaves
/// keep their training class counts and predict the argmax (ties to the
/// lowest class index).
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<int> counts;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  int predict(std::span<const double> x) const;
  const TreeNode& leaf_for(std::span<const double> x) const;
  std::size_t leaf_count() const;
  std::size_t internal_count() const;
};

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 0;           // 0 = unlimited
  int features_per_split = 0;  // 0 = ceil(sqrt(d))
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int n_features = 0;
  int n_classes = 0;
  ForestConfig config;
  std::uint64_t seed = 0;

  /// Majority vote over trees; ties go to the lowest class index.
  int predict(std::span<const double> x) const;
  std::vector<int> predict(const std::vector<std::vector<double>>& x) const;
};

/// Bagged forest: each tree sees a bootstrap sample (n draws with
/// replacement) and ceil(sqrt(d)) candidate features per node; splits
/// maximize Gini impurity decrease. Deterministic per seed.
ForestModel train_forest(const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y, const ForestConfig& config,
                         std::uint64_t seed);

/// Mean decrease in Gini impurity per feature, accumulated by routing the
/// given samples through every split and normalized to sum 1.
std::vector<double> feature_importance(const ForestModel& forest,
                                       const std::vector<std::vector<double>>& x,
                                       const std::vector<int>& y);

/// Same, keyed by feature name.
std::map<std::string, double> feature_importance_named(
    const ForestModel& forest, const std::vector<std::vector<double>>& x,
    const std::vector<int>& y, const std::vector<std::string>& names);

}  // namespace rtclass
