#include "atpg/podem.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace atpg {
namespace {

LogicValue negate(LogicValue v) {
  return v == LogicValue::ONE ? LogicValue::ZERO : LogicValue::ONE;
}

bool is_inverting(GateType t) {
  return t == GateType::NOT || t == GateType::NAND || t == GateType::NOR ||
         t == GateType::XNOR;
}

// Value an X input of a D-frontier gate is driven toward to advance the
// frontier: the non-controlling value for AND/OR families, 0 elsewhere.
bool frontier_advance_value(GateType t) {
  switch (t) {
    case GateType::AND:
    case GateType::NAND:
      return true;
    default:
      return false;
  }
}

struct Decision {
  NetId pi;
  LogicValue value;
  bool flipped;
  int id;
};

}  // namespace

const char* to_string(AtpgOutcome o) {
  switch (o) {
    case AtpgOutcome::DETECTED: return "DETECTED";
    case AtpgOutcome::UNTESTABLE: return "UNTESTABLE";
    case AtpgOutcome::ABORTED: return "ABORTED";
  }
  return "?";
}

std::pair<NetId, LogicValue> backtrace(const Circuit& c, const ValueState& state,
                                       NetId obj_net, bool obj_value,
                                       const BacktraceHeuristic& heuristic,
                                       std::vector<NetId>* trail) {
  if (state.value(obj_net) != LogicValue::X) {
    throw CircuitError("backtrace: objective net is already assigned");
  }
  NetId net = obj_net;
  bool value = obj_value;
  while (true) {
    if (trail) trail->push_back(net);
    const Net& n = c.net(net);
    if (n.driver == kNoGate) {
      return {net, value ? LogicValue::ONE : LogicValue::ZERO};
    }
    const Gate& g = c.gate(n.driver);
    bool required;
    switch (g.type) {
      case GateType::NOT:
      case GateType::BUF:
        net = g.inputs[0];
        value = g.type == GateType::NOT ? !value : value;
        continue;
      case GateType::AND:
      case GateType::NAND: {
        bool target = is_inverting(g.type) ? !value : value;
        required = target;  // out=1 needs all 1s, out=0 needs a single 0
        break;
      }
      case GateType::OR:
      case GateType::NOR: {
        bool target = is_inverting(g.type) ? !value : value;
        required = target;
        break;
      }
      case GateType::XOR:
      case GateType::XNOR: {
        // Parity of known inputs (good-machine view); remaining X inputs
        // other than the chosen one are treated as 0.
        int parity = g.type == GateType::XNOR ? 1 : 0;
        for (NetId in : g.inputs) {
          int gc = good_component(state.value(in));
          if (gc != 2) parity ^= gc;
        }
        required = static_cast<bool>(parity ^ static_cast<int>(value));
        break;
      }
      default:
        throw CircuitError(std::string("backtrace: unsupported gate ") +
                           to_string(g.type));
    }
    NetId pick = kNoNet;
    double pick_score = -std::numeric_limits<double>::infinity();
    for (NetId in : g.inputs) {
      if (state.value(in) != LogicValue::X) continue;
      double s = heuristic.score(in, required);
      if (pick == kNoNet || s > pick_score || (s == pick_score && in < pick)) {
        pick = in;
        pick_score = s;
      }
    }
    if (pick == kNoNet) {
      throw CircuitError("backtrace: no X-valued input (inconsistent state)");
    }
    net = pick;
    value = required;
  }
}

AtpgResult generate_test(const Circuit& c, const Fault& fault,
                         const BacktraceHeuristic& heuristic,
                         long backtrack_limit, TraceObserver* observer) {
  auto start = std::chrono::steady_clock::now();
  AtpgResult result;
  result.fault = fault;

  ValueState state(c, fault);
  std::vector<Decision> stack;
  std::vector<NetId> trail;
  int next_id = 0;

  auto finish = [&](AtpgOutcome outcome) {
    result.outcome = outcome;
    result.fault.status = outcome == AtpgOutcome::DETECTED  ? FaultStatus::DETECTED
                          : outcome == AtpgOutcome::ABORTED ? FaultStatus::ABORTED
                                                            : FaultStatus::UNTESTABLE;
    if (outcome == AtpgOutcome::DETECTED) {
      result.vector.reserve(c.inputs().size());
      for (NetId in : c.inputs()) {
        int gc = good_component(state.value(in));
        result.vector.push_back(gc == 2 ? LogicValue::X
                                        : gc ? LogicValue::ONE : LogicValue::ZERO);
      }
      // Soundness gate: validate against the serial fault simulator with X
      // filled as 0 before reporting.
      InputVector filled = result.vector;
      for (LogicValue& v : filled) {
        if (v == LogicValue::X) v = LogicValue::ZERO;
      }
      CoverageReport check = fault_simulate(c, {filled}, {fault});
      if (check.detected != 1) {
        throw CircuitError("internal: DETECTED vector failed fault-simulation check");
      }
    }
    result.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    return result;
  };

  while (true) {
    if (state.d_at_output()) return finish(AtpgOutcome::DETECTED);

    bool failure = state.fault_blocked() ||
                   (state.fault_activated() && state.d_frontier().empty());
    if (!failure) {
      NetId obj_net;
      bool obj_value;
      if (!state.fault_activated()) {
        obj_net = fault.net;
        obj_value = fault.stuck_at == 0;
      } else {
        // Lowest-level D-frontier gate, ties to the lowest gate id.
        GateId best = kNoGate;
        int best_level = 0;
        for (GateId gid : state.d_frontier()) {
          int level = c.net(c.gate(gid).output).level;
          if (best == kNoGate || level < best_level) {
            best = gid;
            best_level = level;
          }
        }
        const Gate& g = c.gate(best);
        obj_net = kNoNet;
        for (NetId in : g.inputs) {
          if (state.value(in) == LogicValue::X && (obj_net == kNoNet || in < obj_net)) {
            obj_net = in;
          }
        }
        obj_value = frontier_advance_value(g.type);
      }

      trail.clear();
      auto [pi, v] = backtrace(c, state, obj_net, obj_value, heuristic, &trail);
      ++result.backtraces;
      int id = next_id++;
      if (observer) observer->walk(trail, id);
      stack.push_back(Decision{pi, v, false, id});
      ++result.decisions;
      state.assign(pi, v);
      continue;
    }

    // Backtrack: pop exhausted decisions, flip the most recent untried one.
    bool flipped = false;
    while (!flipped) {
      if (stack.empty()) return finish(AtpgOutcome::UNTESTABLE);
      Decision& top = stack.back();
      if (!top.flipped) {
        ++result.backtracks;
        if (result.backtracks > backtrack_limit) {
          return finish(AtpgOutcome::ABORTED);
        }
        if (observer) observer->reversed(top.id);
        state.assign(top.pi, LogicValue::X);
        top.flipped = true;
        top.value = negate(top.value);
        state.assign(top.pi, top.value);
        flipped = true;
      } else {
        state.assign(top.pi, LogicValue::X);
        stack.pop_back();
      }
    }
  }
}

CampaignReport run_campaign(const Circuit& c, const std::vector<Fault>& faults,
                            const BacktraceHeuristic& heuristic,
                            long backtrack_limit, int jobs) {
  auto start = std::chrono::steady_clock::now();
  CampaignReport report;
  report.results.resize(faults.size());

  if (jobs <= 1 || faults.size() <= 1) {
    for (size_t i = 0; i < faults.size(); ++i) {
      report.results[i] = generate_test(c, faults[i], heuristic, backtrack_limit);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= faults.size()) break;
        report.results[i] = generate_test(c, faults[i], heuristic, backtrack_limit);
      }
    };
    std::vector<std::thread> threads;
    int n = std::min<int>(jobs, static_cast<int>(faults.size()));
    threads.reserve(n);
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (const AtpgResult& r : report.results) {
    report.total_backtraces += r.backtraces;
    report.total_backtracks += r.backtracks;
    switch (r.outcome) {
      case AtpgOutcome::DETECTED: ++report.detected; break;
      case AtpgOutcome::UNTESTABLE: ++report.untestable; break;
      case AtpgOutcome::ABORTED: ++report.aborted; break;
    }
  }
  if (faults.empty()) {
    report.zero_faults = true;
    report.coverage_percent = 100.0;
  } else {
    report.coverage_percent =
        100.0 * report.detected / static_cast<double>(faults.size());
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

}  // namespace atpg
