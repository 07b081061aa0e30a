#include "atpg/logic.hpp"

#include <algorithm>
#include <stdexcept>

namespace atpg {
namespace {

constexpr int kUnknown = 2;

// Three-valued primitives over {0, 1, 2=X}.
int and3(int a, int b) {
  if (a == 0 || b == 0) return 0;
  if (a == kUnknown || b == kUnknown) return kUnknown;
  return 1;
}
int or3(int a, int b) {
  if (a == 1 || b == 1) return 1;
  if (a == kUnknown || b == kUnknown) return kUnknown;
  return 0;
}
int not3(int a) { return a == kUnknown ? kUnknown : 1 - a; }
int xor3(int a, int b) {
  if (a == kUnknown || b == kUnknown) return kUnknown;
  return a ^ b;
}

int eval3(GateType type, std::span<const int> ins) {
  switch (type) {
    case GateType::NOT:
      return not3(ins[0]);
    case GateType::BUF:
      return ins[0];
    case GateType::AND:
    case GateType::NAND: {
      int acc = 1;
      for (int v : ins) acc = and3(acc, v);
      return type == GateType::NAND ? not3(acc) : acc;
    }
    case GateType::OR:
    case GateType::NOR: {
      int acc = 0;
      for (int v : ins) acc = or3(acc, v);
      return type == GateType::NOR ? not3(acc) : acc;
    }
    case GateType::XOR:
    case GateType::XNOR: {
      int acc = 0;
      for (int v : ins) acc = xor3(acc, v);
      return type == GateType::XNOR ? not3(acc) : acc;
    }
    default:
      throw CircuitError(std::string("cannot evaluate gate type ") + to_string(type));
  }
}

}  // namespace

const char* to_string(LogicValue v) {
  switch (v) {
    case LogicValue::ZERO: return "0";
    case LogicValue::ONE: return "1";
    case LogicValue::X: return "X";
    case LogicValue::D: return "D";
    case LogicValue::DBAR: return "DBAR";
  }
  return "?";
}

int good_component(LogicValue v) {
  switch (v) {
    case LogicValue::ZERO: return 0;
    case LogicValue::ONE: return 1;
    case LogicValue::D: return 1;
    case LogicValue::DBAR: return 0;
    case LogicValue::X: return kUnknown;
  }
  return kUnknown;
}

int faulty_component(LogicValue v) {
  switch (v) {
    case LogicValue::ZERO: return 0;
    case LogicValue::ONE: return 1;
    case LogicValue::D: return 0;
    case LogicValue::DBAR: return 1;
    case LogicValue::X: return kUnknown;
  }
  return kUnknown;
}

LogicValue encode_components(int good, int faulty) {
  if (good == kUnknown || faulty == kUnknown) return LogicValue::X;
  if (good == faulty) return good ? LogicValue::ONE : LogicValue::ZERO;
  return good ? LogicValue::D : LogicValue::DBAR;
}

LogicValue eval_gate(GateType type, std::span<const LogicValue> inputs) {
  if (inputs.empty()) throw CircuitError("eval_gate: empty input list");
  std::vector<int> good(inputs.size()), faulty(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    good[i] = good_component(inputs[i]);
    faulty[i] = faulty_component(inputs[i]);
  }
  return encode_components(eval3(type, good), eval3(type, faulty));
}

ValueState::ValueState(const Circuit& circuit, const Fault& fault)
    : c_(&circuit), fault_(fault),
      values_(circuit.num_nets(), LogicValue::X) {}

void ValueState::reset() {
  std::fill(values_.begin(), values_.end(), LogicValue::X);
  d_frontier_.clear();
  queue_.clear();
}

LogicValue ValueState::fault_override(LogicValue computed) const {
  int g = good_component(computed);
  return encode_components(g, fault_.stuck_at);
}

void ValueState::enqueue_fanouts(NetId id) {
  for (auto [gid, pin] : c_->net(id).fanouts) {
    queue_.insert({c_->net(c_->gate(gid).output).level, gid});
  }
}

void ValueState::update_frontier(GateId gid) {
  const Gate& g = c_->gate(gid);
  bool member = false;
  if (values_[g.output] == LogicValue::X) {
    for (NetId in : g.inputs) {
      if (is_d(values_[in])) { member = true; break; }
    }
  }
  if (member) d_frontier_.insert(gid);
  else d_frontier_.erase(gid);
}

void ValueState::evaluate_gate_event(GateId gid) {
  const Gate& g = c_->gate(gid);
  std::vector<LogicValue> ins(g.inputs.size());
  for (size_t i = 0; i < g.inputs.size(); ++i) ins[i] = values_[g.inputs[i]];
  LogicValue out = eval_gate(g.type, ins);
  if (g.output == fault_.net) out = fault_override(out);
  if (values_[g.output] != out) {
    values_[g.output] = out;
    enqueue_fanouts(g.output);
  }
  update_frontier(gid);
}

void ValueState::assign(NetId input_net, LogicValue v) {
  const Net& n = c_->net(input_net);
  if (!n.is_pi && !n.is_ppi) {
    throw CircuitError("assign: net '" + n.name + "' is not a PI/PPI");
  }
  if (is_d(v)) throw CircuitError("assign: D values cannot be assigned directly");
  LogicValue effective = v;
  if (input_net == fault_.net && v != LogicValue::X) {
    effective = fault_override(v);
  }
  if (values_[input_net] == effective) return;
  values_[input_net] = effective;
  enqueue_fanouts(input_net);
  while (!queue_.empty()) {
    GateId gid = queue_.begin()->second;
    queue_.erase(queue_.begin());
    evaluate_gate_event(gid);
  }
}

bool ValueState::d_at_output() const {
  for (NetId id : c_->outputs()) {
    if (is_d(values_[id])) return true;
  }
  return false;
}

ValueState& imply(const Circuit& circuit, ValueState& state, const Fault& fault,
                  std::pair<NetId, LogicValue> assignment) {
  (void)circuit;
  (void)fault;
  state.assign(assignment.first, assignment.second);
  return state;
}

std::vector<LogicValue> evaluate_full(
    const Circuit& circuit, const Fault* fault,
    std::span<const std::pair<NetId, LogicValue>> assignments) {
  std::vector<LogicValue> values(circuit.num_nets(), LogicValue::X);
  auto override_at = [&](NetId id, LogicValue v) {
    if (fault && id == fault->net && v != LogicValue::X) {
      return encode_components(good_component(v), fault->stuck_at);
    }
    return v;
  };
  for (auto [net, v] : assignments) values[net] = override_at(net, v);
  for (NetId id : circuit.level_order()) {
    const Net& n = circuit.net(id);
    if (n.driver == kNoGate) continue;
    const Gate& g = circuit.gate(n.driver);
    std::vector<LogicValue> ins(g.inputs.size());
    for (size_t i = 0; i < g.inputs.size(); ++i) ins[i] = values[g.inputs[i]];
    values[id] = override_at(id, eval_gate(g.type, ins));
  }
  return values;
}

CoverageReport fault_simulate(const Circuit& circuit,
                              const std::vector<InputVector>& vectors,
                              const std::vector<Fault>& faults) {
  const auto& inputs = circuit.inputs();
  std::vector<std::vector<std::pair<NetId, LogicValue>>> assignments;
  assignments.reserve(vectors.size());
  for (const InputVector& vec : vectors) {
    if (vec.size() != inputs.size()) {
      throw CircuitError("fault_simulate: vector does not cover all inputs");
    }
    std::vector<std::pair<NetId, LogicValue>> a;
    a.reserve(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i) {
      if (!is_binary(vec[i])) {
        throw CircuitError("fault_simulate: vector has an unassigned input");
      }
      a.emplace_back(inputs[i], vec[i]);
    }
    assignments.push_back(std::move(a));
  }

  CoverageReport report;
  report.rows.reserve(faults.size());
  for (const Fault& f : faults) {
    bool detected = false;
    for (const auto& a : assignments) {
      std::vector<LogicValue> values = evaluate_full(circuit, &f, a);
      for (NetId out : circuit.outputs()) {
        if (is_d(values[out])) { detected = true; break; }
      }
      if (detected) break;
    }
    Fault row = f;
    row.status = detected ? FaultStatus::DETECTED : row.status;
    report.rows.push_back({row, detected});
    if (detected) ++report.detected;
  }
  if (faults.empty()) {
    report.zero_faults = true;
    report.coverage_percent = 100.0;
  } else {
    report.coverage_percent = 100.0 * report.detected / static_cast<double>(faults.size());
  }
  return report;
}

}  // namespace atpg
