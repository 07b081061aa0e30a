#pragma once

#include <map>
#include <string>
#include <vector>

#include "atpg/circuit.hpp"
#include "atpg/podem.hpp"
#include "atpg/testability.hpp"

namespace atpg {

// Per-net backtrace outcome frequencies from instrumented PODEM runs.
struct NetLabelAccumulator {
  std::vector<long> f_total;
  std::vector<long> f_success;

  explicit NetLabelAccumulator(int num_nets = 0)
      : f_total(num_nets, 0), f_success(num_nets, 0) {}

  bool has_data(NetId id) const { return f_total[id] > 0; }
  double p(NetId id) const {
    return static_cast<double>(f_success[id]) / static_cast<double>(f_total[id]);
  }
  long f_fail(NetId id) const { return f_total[id] - f_success[id]; }
  void merge(const NetLabelAccumulator& other);
};

// TraceObserver that scores each backtrace walk by whether its PI decision
// survives the rest of the search (never reversed by a backtrack).
class LabelCollector : public TraceObserver {
 public:
  explicit LabelCollector(int num_nets) : acc_(num_nets) {}

  void walk(std::span<const NetId> nets, int decision) override;
  void reversed(int decision) override;

  // Folds the finished fault run into the accumulator; call after each
  // generate_test.
  void finish_fault();
  const NetLabelAccumulator& accumulator() const { return acc_; }

 private:
  struct Walk {
    std::vector<NetId> nets;
    bool reversed = false;
  };
  std::vector<Walk> walks_;
  NetLabelAccumulator acc_;
};

// Runs COP-guided PODEM over the k_hard hardest faults and accumulates
// no-backtrack labels. Aborted faults still contribute their walks.
NetLabelAccumulator generate_labels(const Circuit& circuit,
                                    const Testability& testability, int k_hard,
                                    long backtrack_limit = kDefaultBacktrackLimit);

struct TrainingRow {
  std::string circuit;
  NetId net = kNoNet;
  FeatureVector features;
  double p = 0.0;
  long f_total = 0;
  long f_success = 0;
};

struct TrainingSet {
  std::vector<TrainingRow> rows;
  std::vector<int> fold;  // parallel to rows; -1 only before assignment
  std::string holdout;
  int k = 0;
};

struct CircuitData {
  std::string name;
  std::vector<FeatureVector> features;
  NetLabelAccumulator labels;
};

// Excludes the holdout circuit and deals rows to k folds circuit by circuit
// with a continuing round-robin cursor, so fold sizes differ by at most one.
// Rows within a circuit are shuffled with a seeded stream. Nets never seen in
// a backtrace emit no row.
TrainingSet assemble_training_set(const std::vector<CircuitData>& circuits,
                                  const std::string& holdout, int k,
                                  uint64_t seed);

// Circuit-level meta labels: 0 where HybNN's work (backtraces + backtracks)
// is smaller, 1 where SVR's is; ties go to 0.
std::map<std::string, int> generate_meta_labels(
    const std::map<std::string, std::pair<long, long>>& work_hybnn_svr);

// Fine-grained alternative (non-default): per net, class of the model with
// the fewer reversed walks through it; ties to 0.
std::vector<int> generate_meta_labels_fine(const NetLabelAccumulator& hybnn_runs,
                                           const NetLabelAccumulator& svr_runs);

}  // namespace atpg
