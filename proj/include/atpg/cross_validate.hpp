#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "atpg/rng.hpp"

namespace atpg {

// Balanced shuffled fold assignment: sizes differ by at most one.
inline std::vector<int> make_folds(size_t n, int k, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("make_folds: k must be >= 2");
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = named_stream(seed, "cv-folds");
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(n);
  for (size_t i = 0; i < n; ++i) fold[order[i]] = static_cast<int>(i % k);
  return fold;
}

struct CvResult {
  size_t best_config = 0;
  double best_mean_score = 0.0;
  // [config][fold] held-fold scores.
  std::vector<std::vector<double>> fold_scores;
  std::vector<double> mean_scores;
};

// For each config, trains on k-1 folds and scores the held fold via
// train_score(config, train_rows, test_rows). Picks argmax (maximize) or
// argmin of the mean; ties resolve to the earlier grid point.
inline CvResult cross_validate(
    size_t n_configs, const std::vector<int>& folds, int k, bool maximize,
    const std::function<double(size_t, const std::vector<size_t>&,
                               const std::vector<size_t>&)>& train_score) {
  if (n_configs == 0) throw std::invalid_argument("cross_validate: empty grid");
  CvResult result;
  result.fold_scores.assign(n_configs, std::vector<double>(k, 0.0));
  result.mean_scores.assign(n_configs, 0.0);
  for (int f = 0; f < k; ++f) {
    std::vector<size_t> train_rows, test_rows;
    for (size_t i = 0; i < folds.size(); ++i) {
      (folds[i] == f ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty() || train_rows.empty()) {
      throw std::runtime_error("cross_validate: fold " + std::to_string(f) +
                               " has no data");
    }
    for (size_t c = 0; c < n_configs; ++c) {
      result.fold_scores[c][f] = train_score(c, train_rows, test_rows);
    }
  }
  for (size_t c = 0; c < n_configs; ++c) {
    double sum = 0.0;
    for (double s : result.fold_scores[c]) sum += s;
    result.mean_scores[c] = sum / k;
  }
  result.best_config = 0;
  result.best_mean_score = result.mean_scores[0];
  for (size_t c = 1; c < n_configs; ++c) {
    bool better = maximize ? result.mean_scores[c] > result.best_mean_score
                           : result.mean_scores[c] < result.best_mean_score;
    if (better) {
      result.best_config = c;
      result.best_mean_score = result.mean_scores[c];
    }
  }
  return result;
}

}  // namespace atpg
