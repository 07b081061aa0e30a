#pragma once

#include <set>
#include <span>
#include <vector>

#include "atpg/circuit.hpp"
#include "atpg/faults.hpp"

namespace atpg {

// Five-valued D-calculus value. D = good 1 / faulty 0, DBAR = good 0 / faulty 1.
enum class LogicValue : uint8_t { ZERO, ONE, X, D, DBAR };

const char* to_string(LogicValue v);

inline bool is_d(LogicValue v) { return v == LogicValue::D || v == LogicValue::DBAR; }
inline bool is_binary(LogicValue v) { return v == LogicValue::ZERO || v == LogicValue::ONE; }

// Good-machine component: 0, 1, or 2 (= unknown).
int good_component(LogicValue v);
int faulty_component(LogicValue v);
LogicValue encode_components(int good, int faulty);

// Five-valued gate evaluation; evaluates the good and faulty components
// independently through the Boolean function and re-encodes. Throws
// CircuitError for non-logic gate types (PI/PO/PPI/PPO/DFF/BAD).
LogicValue eval_gate(GateType type, std::span<const LogicValue> inputs);

// Per-net values plus the D-frontier, with event-driven propagation.
// Confined to a single worker; the circuit itself is shared and immutable.
class ValueState {
 public:
  ValueState(const Circuit& circuit, const Fault& fault);

  // v must be ZERO, ONE, or X; net must be a PI/PPI. Propagates to fixpoint.
  void assign(NetId input_net, LogicValue v);
  void reset();

  LogicValue value(NetId id) const { return values_[id]; }
  const std::vector<LogicValue>& values() const { return values_; }
  const std::set<GateId>& d_frontier() const { return d_frontier_; }
  const Fault& fault() const { return fault_; }

  // Fault site carries D/DBAR.
  bool fault_activated() const { return is_d(values_[fault_.net]); }
  // Fault site pinned to a binary value: activation is impossible under the
  // current assignments.
  bool fault_blocked() const { return is_binary(values_[fault_.net]); }
  // D/DBAR visible at a PO or PPO.
  bool d_at_output() const;

 private:
  LogicValue fault_override(LogicValue computed) const;
  void evaluate_gate_event(GateId gid);
  void update_frontier(GateId gid);
  void enqueue_fanouts(NetId id);

  const Circuit* c_;
  Fault fault_;
  std::vector<LogicValue> values_;
  std::set<GateId> d_frontier_;
  std::set<std::pair<int, GateId>> queue_;  // (output level, gate)
};

// Spec-shaped wrapper over ValueState::assign.
ValueState& imply(const Circuit& circuit, ValueState& state, const Fault& fault,
                  std::pair<NetId, LogicValue> assignment);

// Non-incremental level-order evaluation of the whole circuit under the given
// input-net assignments (missing inputs are X) and optional fault override.
std::vector<LogicValue> evaluate_full(
    const Circuit& circuit, const Fault* fault,
    std::span<const std::pair<NetId, LogicValue>> assignments);

// Fully specified input vector, aligned with circuit.inputs() order.
using InputVector = std::vector<LogicValue>;

struct CoverageReport {
  struct Row {
    Fault fault;
    bool detected = false;
  };
  std::vector<Row> rows;
  int detected = 0;
  // 100 * detected / total; 100 with the zero_faults flag set when empty.
  double coverage_percent = 100.0;
  bool zero_faults = false;
};

// Serial single-fault simulation. Every vector must assign all inputs to 0/1.
CoverageReport fault_simulate(const Circuit& circuit,
                              const std::vector<InputVector>& vectors,
                              const std::vector<Fault>& faults);

}  // namespace atpg
