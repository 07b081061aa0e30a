#include "atpg/heuristics.hpp"

namespace atpg {

NetScoreHeuristic make_hybnn_heuristic(const HybNNModel& model,
                                       const std::vector<FeatureVector>& features) {
  std::vector<double> p;
  p.reserve(features.size());
  for (const FeatureVector& f : features) p.push_back(hybnn_forward(model, f.base));
  return NetScoreHeuristic(std::move(p));
}

NetScoreHeuristic make_svr_heuristic(const SvrModel& model,
                                     const std::vector<FeatureVector>& features) {
  std::vector<double> p;
  p.reserve(features.size());
  for (const FeatureVector& f : features) p.push_back(svr_predict(model, f.base));
  return NetScoreHeuristic(std::move(p));
}

std::vector<int> hybmt_routing(const RandomForestMeta& meta,
                               const std::vector<FeatureVector>& features) {
  std::vector<int> classes;
  classes.reserve(features.size());
  for (const FeatureVector& f : features) {
    classes.push_back(meta_predict(meta, f.extended));
  }
  return classes;
}

NetScoreHeuristic hybmt_heuristic(const RandomForestMeta& meta,
                                  const HybNNModel& hybnn, const SvrModel& svr,
                                  const std::vector<FeatureVector>& features) {
  std::vector<int> routing = hybmt_routing(meta, features);
  std::vector<double> p;
  p.reserve(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    p.push_back(routing[i] == 0 ? hybnn_forward(hybnn, features[i].base)
                                : svr_predict(svr, features[i].base));
  }
  return NetScoreHeuristic(std::move(p));
}

}  // namespace atpg
