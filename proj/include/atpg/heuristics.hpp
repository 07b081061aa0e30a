#pragma once

#include <vector>

#include "atpg/forest.hpp"
#include "atpg/hybnn.hpp"
#include "atpg/podem.hpp"
#include "atpg/svr.hpp"
#include "atpg/testability.hpp"

namespace atpg {

// Per-net no-backtrack probabilities from a single lower-level model.
NetScoreHeuristic make_hybnn_heuristic(const HybNNModel& model,
                                       const std::vector<FeatureVector>& features);
NetScoreHeuristic make_svr_heuristic(const SvrModel& model,
                                     const std::vector<FeatureVector>& features);

// Two-level routing: the meta-classifier picks HybNN (class 0) or SVR
// (class 1) per net on the extended features; the chosen model's score on the
// base features becomes the net's p. All scores are precomputed once, so
// inference is circuit-static.
NetScoreHeuristic hybmt_heuristic(const RandomForestMeta& meta,
                                  const HybNNModel& hybnn, const SvrModel& svr,
                                  const std::vector<FeatureVector>& features);

// Routing classes only (0 = HybNN, 1 = SVR), for inspection and tests.
std::vector<int> hybmt_routing(const RandomForestMeta& meta,
                               const std::vector<FeatureVector>& features);

}  // namespace atpg
