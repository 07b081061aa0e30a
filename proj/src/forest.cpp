#include "atpg/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "atpg/rng.hpp"

namespace atpg {
namespace {

struct TreeBuilder {
  const std::vector<std::vector<double>>& X;
  const std::vector<int>& y;
  int n_features;
  int max_features;
  int min_samples_split;
  std::mt19937_64 rng;
  std::vector<TreeNode> nodes;

  int build(std::vector<int>& idx) {
    int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    long counts[2] = {0, 0};
    for (int i : idx) ++counts[y[i]];
    nodes[node_id].n_samples = static_cast<long>(idx.size());
    nodes[node_id].class_counts[0] = counts[0];
    nodes[node_id].class_counts[1] = counts[1];

    bool pure = counts[0] == 0 || counts[1] == 0;
    if (pure || static_cast<int>(idx.size()) < min_samples_split) return node_id;

    // Sample max_features distinct candidate features.
    std::vector<int> feats(n_features);
    std::iota(feats.begin(), feats.end(), 0);
    for (int i = 0; i < max_features; ++i) {
      std::uniform_int_distribution<int> pick(i, n_features - 1);
      std::swap(feats[i], feats[pick(rng)]);
    }
    feats.resize(max_features);
    std::sort(feats.begin(), feats.end());

    const double n = static_cast<double>(idx.size());
    double best_gini = std::numeric_limits<double>::infinity();
    int best_feat = -1;
    double best_thresh = 0.0;
    std::vector<std::pair<double, int>> vals;
    for (int f : feats) {
      vals.clear();
      for (int i : idx) vals.emplace_back(X[i][f], y[i]);
      std::sort(vals.begin(), vals.end());
      long left[2] = {0, 0};
      for (size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left[vals[i].second];
        if (vals[i].first == vals[i + 1].first) continue;
        double nl = static_cast<double>(i + 1);
        double nr = n - nl;
        long r0 = counts[0] - left[0], r1 = counts[1] - left[1];
        double gl = 1.0 - (left[0] * left[0] + left[1] * left[1]) / (nl * nl);
        double gr = 1.0 - (static_cast<double>(r0) * r0 + static_cast<double>(r1) * r1) / (nr * nr);
        double gini = (nl * gl + nr * gr) / n;
        if (gini < best_gini) {
          best_gini = gini;
          best_feat = f;
          best_thresh = (vals[i].first + vals[i + 1].first) / 2.0;
        }
      }
    }
    if (best_feat < 0) return node_id;  // candidate features all constant

    std::vector<int> left_idx, right_idx;
    for (int i : idx) {
      (X[i][best_feat] <= best_thresh ? left_idx : right_idx).push_back(i);
    }
    if (left_idx.empty() || right_idx.empty()) return node_id;

    nodes[node_id].feature = best_feat;
    nodes[node_id].threshold = best_thresh;
    int l = build(left_idx);
    int r = build(right_idx);
    nodes[node_id].left = l;
    nodes[node_id].right = r;
    return node_id;
  }
};

}  // namespace

int DecisionTree::predict(std::span<const double> x) const {
  int id = 0;
  while (nodes[id].feature >= 0) {
    id = x[nodes[id].feature] <= nodes[id].threshold ? nodes[id].left
                                                     : nodes[id].right;
  }
  return nodes[id].class_counts[1] > nodes[id].class_counts[0] ? 1 : 0;
}

RandomForestMeta meta_train(const std::vector<std::vector<double>>& X,
                            const std::vector<int>& y,
                            const ForestTrainOptions& opts) {
  const int n = static_cast<int>(y.size());
  if (n == 0 || X.size() != y.size()) {
    throw std::invalid_argument("meta_train: empty or mismatched data");
  }
  RandomForestMeta model;
  model.n_features = static_cast<int>(X[0].size());
  int max_features = opts.max_features > 0
                         ? opts.max_features
                         : static_cast<int>(std::sqrt(model.n_features));
  max_features = std::clamp(max_features, 1, model.n_features);

  bool has0 = false, has1 = false;
  for (int c : y) (c == 0 ? has0 : has1) = true;
  model.single_class_warning = !(has0 && has1);

  auto seeder = named_stream(opts.seed, "forest-tree-seeds");
  for (int t = 0; t < opts.n_trees; ++t) model.tree_seeds.push_back(seeder());

  for (int t = 0; t < opts.n_trees; ++t) {
    std::mt19937_64 rng(model.tree_seeds[t]);
    std::vector<int> sample(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < n; ++i) sample[i] = pick(rng);
    std::sort(sample.begin(), sample.end());
    TreeBuilder builder{X, y, model.n_features, max_features,
                        opts.min_samples_split, std::mt19937_64(rng()), {}};
    builder.build(sample);
    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

int meta_predict(const RandomForestMeta& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.n_features) {
    throw std::invalid_argument("meta_predict: dimension mismatch");
  }
  int votes1 = 0;
  for (const DecisionTree& t : model.trees) votes1 += t.predict(x);
  int votes0 = static_cast<int>(model.trees.size()) - votes1;
  return votes1 > votes0 ? 1 : 0;  // ties to class 0
}

std::vector<std::vector<double>> feature_importance_per_tree(
    const RandomForestMeta& model) {
  std::vector<std::vector<double>> per_tree;
  per_tree.reserve(model.trees.size());
  for (const DecisionTree& t : model.trees) {
    std::vector<double> imp(model.n_features, 0.0);
    for (const TreeNode& node : t.nodes) {
      if (node.feature >= 0) imp[node.feature] += static_cast<double>(node.n_samples);
    }
    per_tree.push_back(std::move(imp));
  }
  return per_tree;
}

std::vector<double> feature_importance(const RandomForestMeta& model) {
  std::vector<double> total(model.n_features, 0.0);
  for (const auto& imp : feature_importance_per_tree(model)) {
    for (int f = 0; f < model.n_features; ++f) total[f] += imp[f];
  }
  return total;
}

}  // namespace atpg
