#include "atpg/datagen.hpp"

#include <algorithm>
#include <stdexcept>

#include "atpg/rng.hpp"

namespace atpg {

void NetLabelAccumulator::merge(const NetLabelAccumulator& other) {
  if (other.f_total.size() != f_total.size()) {
    throw std::invalid_argument("NetLabelAccumulator::merge: size mismatch");
  }
  for (size_t i = 0; i < f_total.size(); ++i) {
    f_total[i] += other.f_total[i];
    f_success[i] += other.f_success[i];
  }
}

void LabelCollector::walk(std::span<const NetId> nets, int decision) {
  if (decision != static_cast<int>(walks_.size())) {
    throw std::logic_error("LabelCollector: decision ids must be dense");
  }
  walks_.push_back(Walk{{nets.begin(), nets.end()}, false});
}

void LabelCollector::reversed(int decision) {
  walks_[decision].reversed = true;
}

void LabelCollector::finish_fault() {
  for (const Walk& w : walks_) {
    for (NetId net : w.nets) {
      ++acc_.f_total[net];
      if (!w.reversed) ++acc_.f_success[net];
    }
  }
  walks_.clear();
}

NetLabelAccumulator generate_labels(const Circuit& circuit,
                                    const Testability& testability, int k_hard,
                                    long backtrack_limit) {
  std::vector<double> cc(circuit.num_nets());
  for (NetId id = 0; id < circuit.num_nets(); ++id) cc[id] = testability[id].cc;
  CopHeuristic heuristic(cc);

  std::vector<Fault> faults = enumerate_faults(circuit);
  for (Fault& f : faults) {
    f.p_detect = detection_probability(f, testability[f.net].cc, testability[f.net].co);
  }
  faults = rank_hard_faults(std::move(faults), static_cast<size_t>(k_hard));

  LabelCollector collector(circuit.num_nets());
  for (const Fault& f : faults) {
    generate_test(circuit, f, heuristic, backtrack_limit, &collector);
    collector.finish_fault();
  }
  return collector.accumulator();
}

TrainingSet assemble_training_set(const std::vector<CircuitData>& circuits,
                                  const std::string& holdout, int k,
                                  uint64_t seed) {
  if (circuits.size() < 2) {
    throw std::invalid_argument("assemble_training_set: need at least 2 circuits");
  }
  if (k < 2) throw std::invalid_argument("assemble_training_set: k must be >= 2");
  bool holdout_found = holdout.empty();

  TrainingSet set;
  set.holdout = holdout;
  set.k = k;
  size_t cursor = 0;  // continues across circuits to keep folds balanced
  for (const CircuitData& cd : circuits) {
    if (cd.name == holdout) {
      holdout_found = true;
      continue;
    }
    std::vector<NetId> nets;
    for (NetId id = 0; id < static_cast<NetId>(cd.features.size()); ++id) {
      if (cd.labels.has_data(id)) nets.push_back(id);
    }
    auto rng = named_stream(seed, "fold-shuffle:" + cd.name);
    std::shuffle(nets.begin(), nets.end(), rng);
    for (NetId id : nets) {
      TrainingRow row;
      row.circuit = cd.name;
      row.net = id;
      row.features = cd.features[id];
      row.f_total = cd.labels.f_total[id];
      row.f_success = cd.labels.f_success[id];
      row.p = cd.labels.p(id);
      set.rows.push_back(std::move(row));
      set.fold.push_back(static_cast<int>(cursor % k));
      ++cursor;
    }
  }
  if (!holdout_found) {
    throw std::invalid_argument("assemble_training_set: holdout circuit '" +
                                holdout + "' not found");
  }
  if (static_cast<size_t>(k) > set.rows.size()) {
    throw std::invalid_argument("assemble_training_set: k exceeds row count");
  }
  return set;
}

std::map<std::string, int> generate_meta_labels(
    const std::map<std::string, std::pair<long, long>>& work_hybnn_svr) {
  std::map<std::string, int> classes;
  for (const auto& [name, work] : work_hybnn_svr) {
    classes[name] = work.second < work.first ? 1 : 0;
  }
  return classes;
}

std::vector<int> generate_meta_labels_fine(const NetLabelAccumulator& hybnn_runs,
                                           const NetLabelAccumulator& svr_runs) {
  if (hybnn_runs.f_total.size() != svr_runs.f_total.size()) {
    throw std::invalid_argument("generate_meta_labels_fine: size mismatch");
  }
  std::vector<int> classes(hybnn_runs.f_total.size(), 0);
  for (size_t i = 0; i < classes.size(); ++i) {
    classes[i] = svr_runs.f_fail(static_cast<NetId>(i)) <
                         hybnn_runs.f_fail(static_cast<NetId>(i))
                     ? 1
                     : 0;
  }
  return classes;
}

}  // namespace atpg
