#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "atpg/circuit.hpp"
#include "atpg/faults.hpp"
#include "atpg/logic.hpp"
#include "atpg/testability.hpp"

namespace atpg {

// Backtrace input-selection policy. The engine only compares scores, so any
// strictly monotone transform yields identical decisions. required_value is
// the value the candidate input would be driven toward.
class BacktraceHeuristic {
 public:
  virtual ~BacktraceHeuristic() = default;
  virtual double score(NetId net, bool required_value) const = 0;
};

// COP baseline: prefer the input easiest to set to the required value.
class CopHeuristic : public BacktraceHeuristic {
 public:
  explicit CopHeuristic(std::vector<double> cc) : cc_(std::move(cc)) {}
  double score(NetId net, bool required_value) const override {
    return required_value ? cc_[net] : 1.0 - cc_[net];
  }

 private:
  std::vector<double> cc_;
};

// Precomputed per-net score (no-backtrack probability); ignores the value.
class NetScoreHeuristic : public BacktraceHeuristic {
 public:
  explicit NetScoreHeuristic(std::vector<double> p) : p_(std::move(p)) {}
  double score(NetId net, bool) const override { return p_[net]; }
  const std::vector<double>& scores() const { return p_; }

 private:
  std::vector<double> p_;
};

enum class AtpgOutcome : uint8_t { DETECTED, UNTESTABLE, ABORTED };
const char* to_string(AtpgOutcome o);

struct AtpgResult {
  Fault fault;
  AtpgOutcome outcome = AtpgOutcome::UNTESTABLE;
  InputVector vector;  // aligned with circuit.inputs(); X where unassigned
  long backtraces = 0;
  long backtracks = 0;
  long decisions = 0;
  std::chrono::microseconds elapsed{0};
};

// Hooks for label generation: each backtrace walk creates one PI decision;
// reversed(decision) fires when that decision is undone by a backtrack.
class TraceObserver {
 public:
  virtual ~TraceObserver() = default;
  virtual void walk(std::span<const NetId> nets, int decision) = 0;
  virtual void reversed(int decision) = 0;
};

// One backtrace step: walk from the objective to an unassigned PI, flipping
// the target value through inverting gates and picking X inputs by heuristic
// score (ties to the lowest net id). Appends visited nets to trail if given.
std::pair<NetId, LogicValue> backtrace(const Circuit& circuit,
                                       const ValueState& state, NetId obj_net,
                                       bool obj_value,
                                       const BacktraceHeuristic& heuristic,
                                       std::vector<NetId>* trail = nullptr);

inline constexpr long kDefaultBacktrackLimit = 10'000;

AtpgResult generate_test(const Circuit& circuit, const Fault& fault,
                         const BacktraceHeuristic& heuristic,
                         long backtrack_limit = kDefaultBacktrackLimit,
                         TraceObserver* observer = nullptr);

struct CampaignReport {
  std::vector<AtpgResult> results;
  long total_backtraces = 0;
  long total_backtracks = 0;
  int detected = 0;
  int untestable = 0;
  int aborted = 0;
  double coverage_percent = 100.0;
  bool zero_faults = false;
  std::chrono::microseconds elapsed{0};

  long work() const { return total_backtraces + total_backtracks; }
};

// Runs generate_test per fault; results are in fault-list order regardless of
// the number of worker threads.
CampaignReport run_campaign(const Circuit& circuit,
                            const std::vector<Fault>& faults,
                            const BacktraceHeuristic& heuristic,
                            long backtrack_limit = kDefaultBacktrackLimit,
                            int jobs = 1);

}  // namespace atpg
