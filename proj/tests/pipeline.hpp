#pragma once

// Shared end-to-end training pipeline used by the acceptance suite: per-circuit
// label generation, lower-level model training, meta-label construction, and
// leave-one-out evaluation of the routed heuristic against the COP baseline.

#include <map>
#include <string>
#include <vector>

#include "atpg/circuit.hpp"
#include "atpg/datagen.hpp"
#include "atpg/forest.hpp"
#include "atpg/heuristics.hpp"
#include "atpg/hybnn.hpp"
#include "atpg/model_io.hpp"
#include "atpg/podem.hpp"
#include "atpg/rng.hpp"
#include "atpg/svr.hpp"
#include "atpg/testability.hpp"

namespace atpg::testing {

struct PipelineOptions {
  int k_hard = 100;            // faults per circuit, both labeling and eval
  long label_limit = 1000;     // backtrack limit while generating labels
  long eval_limit = 10'000;    // backtrack limit for baseline-vs-model runs
  int hybnn_h1 = 16;
  int hybnn_h2 = 8;
  int hybnn_epochs = 80;
  int hybnn_batch = 64;
  size_t svr_row_cap = 600;    // SMO cost guard
  int meta_trees = 50;
  uint64_t seed = 1;
};

struct FixtureData {
  std::string name;
  Circuit circuit;
  Testability testability;
  std::vector<FeatureVector> features;
  NetLabelAccumulator labels;
  std::vector<Fault> hard;

  std::vector<double> cop_cc() const {
    std::vector<double> cc(circuit.num_nets());
    for (NetId id = 0; id < circuit.num_nets(); ++id) cc[id] = testability[id].cc;
    return cc;
  }
};

inline FixtureData prepare_fixture(std::string name, Circuit c,
                                   const PipelineOptions& opts) {
  FixtureData d{std::move(name), std::move(c), {}, {}, NetLabelAccumulator(0), {}};
  d.testability = analyze_testability(d.circuit);
  d.features = build_features(d.circuit, d.testability);
  std::vector<Fault> faults = enumerate_faults(d.circuit);
  for (Fault& f : faults) {
    f.p_detect =
        detection_probability(f, d.testability[f.net].cc, d.testability[f.net].co);
  }
  d.hard = rank_hard_faults(std::move(faults), opts.k_hard);
  d.labels = generate_labels(d.circuit, d.testability, opts.k_hard, opts.label_limit);
  return d;
}

// Trains HybNN + SVR on the pooled labeled rows of the given fixtures, builds
// circuit-level meta labels by racing the two models on each training fixture,
// and fits the routing forest.
inline HybMTBundle train_hybmt(const std::vector<const FixtureData*>& train_set,
                               const PipelineOptions& opts) {
  std::vector<double> Xflat, y;
  std::vector<std::vector<double>> Xvec;
  for (const FixtureData* d : train_set) {
    for (NetId id = 0; id < d->circuit.num_nets(); ++id) {
      if (!d->labels.has_data(id)) continue;
      const auto& b = d->features[id].base;
      Xflat.insert(Xflat.end(), b.begin(), b.end());
      Xvec.emplace_back(b.begin(), b.end());
      y.push_back(d->labels.p(id));
    }
  }

  HybMTBundle bundle;
  bundle.hybnn = hybnn_init(opts.hybnn_h1, opts.hybnn_h2, opts.seed);
  HybNNTrainOptions nn_opts;
  nn_opts.epochs = opts.hybnn_epochs;
  nn_opts.batch = opts.hybnn_batch;
  nn_opts.seed = opts.seed;
  hybnn_train(bundle.hybnn, Xflat, y, nn_opts);

  // Deterministic row cap keeps the SMO solve quick on pooled corpora.
  std::vector<std::vector<double>> Xs = Xvec;
  std::vector<double> ys = y;
  if (Xs.size() > opts.svr_row_cap) {
    std::vector<size_t> order(Xs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto rng = named_stream(opts.seed, "svr-row-cap");
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(opts.svr_row_cap);
    std::sort(order.begin(), order.end());
    std::vector<std::vector<double>> Xc;
    std::vector<double> yc;
    for (size_t i : order) {
      Xc.push_back(Xs[i]);
      yc.push_back(ys[i]);
    }
    Xs = std::move(Xc);
    ys = std::move(yc);
  }
  SvrTrainOptions svr_opts;
  svr_opts.C = 10.0;
  svr_opts.epsilon = 0.05;
  bundle.svr = svr_train(Xs, ys, svr_opts);

  // Circuit-level meta labels: race the two lower-level models per fixture.
  std::map<std::string, std::pair<long, long>> work;
  for (const FixtureData* d : train_set) {
    NetScoreHeuristic hh = make_hybnn_heuristic(bundle.hybnn, d->features);
    NetScoreHeuristic sh = make_svr_heuristic(bundle.svr, d->features);
    CampaignReport rh = run_campaign(d->circuit, d->hard, hh, opts.label_limit);
    CampaignReport rs = run_campaign(d->circuit, d->hard, sh, opts.label_limit);
    work[d->name] = {rh.work(), rs.work()};
  }
  std::map<std::string, int> classes = generate_meta_labels(work);

  std::vector<std::vector<double>> Xm;
  std::vector<int> ym;
  for (const FixtureData* d : train_set) {
    int cls = classes.at(d->name);
    for (NetId id = 0; id < d->circuit.num_nets(); ++id) {
      if (!d->labels.has_data(id)) continue;
      const auto& e = d->features[id].extended;
      Xm.emplace_back(e.begin(), e.end());
      ym.push_back(cls);
    }
  }
  ForestTrainOptions f_opts;
  f_opts.n_trees = opts.meta_trees;
  f_opts.seed = opts.seed;
  bundle.meta = meta_train(Xm, ym, f_opts);
  return bundle;
}

struct HoldoutResult {
  CampaignReport baseline;  // COP
  CampaignReport routed;    // HybMT
  bool work_le() const { return routed.work() <= baseline.work(); }
  bool coverage_ge() const {
    return routed.detected >= baseline.detected;
  }
};

inline HoldoutResult evaluate_holdout(const FixtureData& holdout,
                                      const HybMTBundle& bundle,
                                      const PipelineOptions& opts) {
  HoldoutResult r;
  CopHeuristic cop(holdout.cop_cc());
  r.baseline = run_campaign(holdout.circuit, holdout.hard, cop, opts.eval_limit);
  NetScoreHeuristic routed =
      hybmt_heuristic(bundle.meta, bundle.hybnn, bundle.svr, holdout.features);
  r.routed = run_campaign(holdout.circuit, holdout.hard, routed, opts.eval_limit);
  return r;
}

}  // namespace atpg::testing
