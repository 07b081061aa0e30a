#include "atpg/circuit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <queue>

namespace atpg {

const char* to_string(GateType t) {
  static constexpr std::array<const char*, kGateTypeCount> names = {
      "PI", "PO", "PPI", "PPO", "NOT", "AND", "NAND",
      "OR", "NOR", "XOR", "XNOR", "DFF", "BUF", "BAD"};
  return names[static_cast<int>(t)];
}

std::optional<GateType> gate_type_from_keyword(std::string_view kw) {
  std::string up(kw);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (int i = 0; i < kGateTypeCount; ++i) {
    auto t = static_cast<GateType>(i);
    if (up == to_string(t)) return t;
  }
  return std::nullopt;
}

NetId Circuit::find_net(std::string_view name) const {
  auto it = name_to_id_.find(std::string(name));
  return it == name_to_id_.end() ? kNoNet : it->second;
}

GateType Circuit::net_type(NetId id) const {
  const Net& n = nets_[id];
  if (n.is_pi) return GateType::PI;
  if (n.is_ppi) return GateType::PPI;
  return gates_[n.driver].type;
}

NetId CircuitBuilder::add_net(const std::string& name) {
  auto it = c_.name_to_id_.find(name);
  if (it != c_.name_to_id_.end()) return it->second;
  NetId id = static_cast<NetId>(c_.nets_.size());
  c_.nets_.push_back(Net{});
  c_.nets_.back().name = name;
  c_.name_to_id_.emplace(name, id);
  return id;
}

NetId CircuitBuilder::net_id(const std::string& name) const {
  auto it = c_.name_to_id_.find(name);
  return it == c_.name_to_id_.end() ? kNoNet : it->second;
}

void CircuitBuilder::mark_input(NetId id) {
  c_.nets_[id].is_pi = true;
  c_.inputs_.push_back(id);
}

void CircuitBuilder::mark_output(NetId id) {
  c_.nets_[id].is_po = true;
  c_.outputs_.push_back(id);
}

void CircuitBuilder::mark_ppi(NetId id) {
  c_.nets_[id].is_ppi = true;
  c_.inputs_.push_back(id);
}

void CircuitBuilder::mark_ppo(NetId id) {
  c_.nets_[id].is_ppo = true;
  c_.outputs_.push_back(id);
}

void CircuitBuilder::add_dff_pair(NetId ppi, NetId ppo) {
  c_.dff_pairs_.emplace_back(ppi, ppo);
}

bool CircuitBuilder::has_driver(NetId id) const {
  const Net& n = c_.nets_[id];
  return n.driver != kNoGate || n.is_pi || n.is_ppi;
}

GateId CircuitBuilder::add_gate(GateType type, std::vector<NetId> inputs, NetId output) {
  GateId gid = static_cast<GateId>(c_.gates_.size());
  for (size_t pin = 0; pin < inputs.size(); ++pin) {
    c_.nets_[inputs[pin]].fanouts.emplace_back(gid, static_cast<int>(pin));
  }
  c_.nets_[output].driver = gid;
  if (type == GateType::BAD) ++c_.bad_gate_count_;
  c_.gates_.push_back(Gate{type, std::move(inputs), output});
  return gid;
}

Circuit CircuitBuilder::build() {
  for (NetId id = 0; id < c_.num_nets(); ++id) {
    const Net& n = c_.nets_[id];
    if (n.driver == kNoGate && !n.is_pi && !n.is_ppi) {
      throw CircuitError("net '" + n.name + "' is referenced but never defined");
    }
  }
  levelize(c_);
  return std::move(c_);
}

void levelize(Circuit& circuit) {
  const int n = circuit.num_nets();
  std::vector<int> pending(n, 0);
  for (NetId id = 0; id < n; ++id) {
    const Net& net = circuit.nets_[id];
    if (net.driver != kNoGate) {
      pending[id] = static_cast<int>(circuit.gates_[net.driver].inputs.size());
    }
  }
  std::queue<NetId> ready;
  for (NetId id = 0; id < n; ++id) {
    if (pending[id] == 0) {
      circuit.nets_[id].level = 0;
      ready.push(id);
    }
  }
  int resolved = 0;
  while (!ready.empty()) {
    NetId id = ready.front();
    ready.pop();
    ++resolved;
    for (auto [gid, pin] : circuit.nets_[id].fanouts) {
      NetId out = circuit.gates_[gid].output;
      circuit.nets_[out].level =
          std::max(circuit.nets_[out].level, circuit.nets_[id].level + 1);
      if (--pending[out] == 0) ready.push(out);
    }
  }
  if (resolved != n) throw CircuitError("combinational cycle detected");

  circuit.level_order_.resize(n);
  for (NetId id = 0; id < n; ++id) circuit.level_order_[id] = id;
  std::stable_sort(circuit.level_order_.begin(), circuit.level_order_.end(),
                   [&](NetId a, NetId b) {
                     return circuit.nets_[a].level < circuit.nets_[b].level;
                   });
  circuit.max_level_ = 0;
  for (NetId id = 0; id < n; ++id) {
    circuit.max_level_ = std::max(circuit.max_level_, circuit.nets_[id].level);
  }
}

std::vector<int> shortest_pi_distance(const Circuit& circuit) {
  const int n = circuit.num_nets();
  std::vector<int> dist(n, -1);
  std::queue<NetId> q;
  for (NetId id : circuit.inputs()) {
    dist[id] = 0;
    q.push(id);
  }
  // BFS over "net -> nets driven by gates this net feeds" edges; each gate
  // traversal costs one hop.
  while (!q.empty()) {
    NetId id = q.front();
    q.pop();
    for (auto [gid, pin] : circuit.net(id).fanouts) {
      NetId out = circuit.gate(gid).output;
      if (dist[out] == -1) {
        dist[out] = dist[id] + 1;
        q.push(out);
      }
    }
  }
  return dist;
}

}  // namespace atpg
