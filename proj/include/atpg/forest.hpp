#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace atpg {

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  long n_samples = 0;      // training samples reaching this node
  long class_counts[2] = {0, 0};
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  int predict(std::span<const double> x) const;
};

struct RandomForestMeta {
  int n_features = 0;
  std::vector<DecisionTree> trees;
  std::vector<uint64_t> tree_seeds;
  bool single_class_warning = false;
};

struct ForestTrainOptions {
  int n_trees = 100;
  int max_features = 0;  // <= 0: floor(sqrt(n_features))
  int min_samples_split = 2;
  uint64_t seed = 0;
};

// CART with Gini impurity on a bootstrap sample per tree; grown until pure or
// below min_samples_split. Deterministic given the seed. Single-class data
// yields a constant forest with single_class_warning set.
RandomForestMeta meta_train(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y,
                            const ForestTrainOptions& opts);

// Majority vote; ties resolve to class 0.
int meta_predict(const RandomForestMeta& model, std::span<const double> x);

// Per feature: sum over split nodes using it of the training samples
// reaching that node, summed across trees.
std::vector<double> feature_importance(const RandomForestMeta& model);
std::vector<std::vector<double>> feature_importance_per_tree(
    const RandomForestMeta& model);

}  // namespace atpg
