#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace atpg {

// One-hot encoding width for gate types is fixed at 14.
enum class GateType : uint8_t {
  PI, PO, PPI, PPO, NOT, AND, NAND, OR, NOR, XOR, XNOR, DFF, BUF, BAD
};
inline constexpr int kGateTypeCount = 14;

const char* to_string(GateType t);
std::optional<GateType> gate_type_from_keyword(std::string_view kw);

using NetId = int32_t;
using GateId = int32_t;
inline constexpr NetId kNoNet = -1;
inline constexpr GateId kNoGate = -1;

struct Gate {
  GateType type;
  std::vector<NetId> inputs;
  NetId output = kNoNet;
};

struct Net {
  std::string name;
  GateId driver = kNoGate;  // kNoGate for PI/PPI nets
  std::vector<std::pair<GateId, int>> fanouts;  // (gate, input pin)
  int level = 0;
  bool is_pi = false;
  bool is_ppi = false;
  bool is_po = false;   // listed in OUTPUT(...)
  bool is_ppo = false;  // feeds a DFF data input

  int fanout_count() const { return static_cast<int>(fanouts.size()); }
};

class CircuitError : public std::runtime_error {
 public:
  explicit CircuitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Immutable levelized combinational netlist graph. DFFs are decomposed at
// parse time into PPI/PPO pairs (full-scan assumption), so the graph is
// acyclic; levelize() rejects cycles.
class Circuit {
 public:
  const std::vector<Net>& nets() const { return nets_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const Net& net(NetId id) const { return nets_[id]; }
  const Gate& gate(GateId id) const { return gates_[id]; }
  int num_nets() const { return static_cast<int>(nets_.size()); }
  int num_gates() const { return static_cast<int>(gates_.size()); }

  // PIs then PPIs, in file order.
  const std::vector<NetId>& inputs() const { return inputs_; }
  // POs then PPOs, in file order.
  const std::vector<NetId>& outputs() const { return outputs_; }
  // (ppi_net, ppo_net) per decomposed DFF, file order.
  const std::vector<std::pair<NetId, NetId>>& dff_pairs() const { return dff_pairs_; }

  // Net ids sorted by (level, id); valid after levelize().
  const std::vector<NetId>& level_order() const { return level_order_; }
  int max_level() const { return max_level_; }

  NetId find_net(std::string_view name) const;
  // Type of the driving gate; PI/PPI for input nets.
  GateType net_type(NetId id) const;
  bool has_bad_gates() const { return bad_gate_count_ > 0; }
  int bad_gate_count() const { return bad_gate_count_; }

  friend class CircuitBuilder;
  friend void levelize(Circuit& circuit);

 private:
  std::vector<Net> nets_;
  std::vector<Gate> gates_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<std::pair<NetId, NetId>> dff_pairs_;
  std::vector<NetId> level_order_;
  std::unordered_map<std::string, NetId> name_to_id_;
  int max_level_ = 0;
  int bad_gate_count_ = 0;
};

// Mutable staging area used by the parser and by test circuit generators.
class CircuitBuilder {
 public:
  NetId add_net(const std::string& name);
  NetId net_id(const std::string& name) const;  // kNoNet if absent
  void mark_input(NetId id);
  void mark_output(NetId id);
  void mark_ppi(NetId id);
  void mark_ppo(NetId id);
  void add_dff_pair(NetId ppi, NetId ppo);
  GateId add_gate(GateType type, std::vector<NetId> inputs, NetId output);
  bool has_driver(NetId id) const;

  // Validates connectivity, levelizes, and freezes the circuit.
  Circuit build();

 private:
  Circuit c_;
};

// Assigns level 0 to PI/PPI nets and level(output) = 1 + max(level(inputs))
// for every gate, filling level_order. Throws CircuitError on a cycle.
void levelize(Circuit& circuit);

// Gate-hop BFS distance from the nearest PI/PPI; input nets are at 0.
std::vector<int> shortest_pi_distance(const Circuit& circuit);

}  // namespace atpg
