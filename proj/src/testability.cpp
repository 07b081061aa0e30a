#include "atpg/testability.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace atpg {
namespace {

void reject_bad(const Circuit& c) {
  if (c.has_bad_gates()) {
    throw CircuitError("testability analysis refuses circuits with BAD gates");
  }
}

// Gate depth is fixed at 1 for all SCOAP recurrences.
constexpr int64_t kDepth = 1;

}  // namespace

std::vector<double> cop_controllability(const Circuit& c) {
  reject_bad(c);
  std::vector<double> cc(c.num_nets(), 0.0);
  for (NetId id : c.level_order()) {
    const Net& n = c.net(id);
    if (n.driver == kNoGate) {
      cc[id] = 0.5;  // PI/PPI convention
      continue;
    }
    const Gate& g = c.gate(n.driver);
    switch (g.type) {
      case GateType::NOT:
        cc[id] = 1.0 - cc[g.inputs[0]];
        break;
      case GateType::BUF:
        cc[id] = cc[g.inputs[0]];
        break;
      case GateType::AND:
      case GateType::NAND: {
        double p = 1.0;
        for (NetId in : g.inputs) p *= cc[in];
        cc[id] = g.type == GateType::NAND ? 1.0 - p : p;
        break;
      }
      case GateType::OR:
      case GateType::NOR: {
        double q = 1.0;
        for (NetId in : g.inputs) q *= 1.0 - cc[in];
        cc[id] = g.type == GateType::NOR ? q : 1.0 - q;
        break;
      }
      case GateType::XOR:
      case GateType::XNOR: {
        double odd = 0.0;
        for (NetId in : g.inputs) {
          double p = cc[in];
          odd = odd * (1.0 - p) + (1.0 - odd) * p;
        }
        cc[id] = g.type == GateType::XNOR ? 1.0 - odd : odd;
        break;
      }
      default:
        throw CircuitError(std::string("cop_controllability: unsupported gate ") +
                           to_string(g.type));
    }
  }
  return cc;
}

std::vector<double> cop_observability(const Circuit& c,
                                      const std::vector<double>& cc) {
  reject_bad(c);
  std::vector<double> co(c.num_nets(), 0.0);
  const auto& order = c.level_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NetId id = *it;
    const Net& n = c.net(id);
    double best = (n.is_po || n.is_ppo) ? 1.0 : 0.0;
    for (auto [gid, pin] : n.fanouts) {
      const Gate& g = c.gate(gid);
      double out_co = co[g.output];
      double through = 0.0;
      switch (g.type) {
        case GateType::NOT:
        case GateType::BUF:
        case GateType::XOR:
        case GateType::XNOR:
          through = out_co;
          break;
        case GateType::AND:
        case GateType::NAND: {
          double p = 1.0;
          for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (static_cast<int>(i) != pin) p *= cc[g.inputs[i]];
          }
          through = out_co * p;
          break;
        }
        case GateType::OR:
        case GateType::NOR: {
          double p = 1.0;
          for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (static_cast<int>(i) != pin) p *= 1.0 - cc[g.inputs[i]];
          }
          through = out_co * p;
          break;
        }
        default:
          throw CircuitError(std::string("cop_observability: unsupported gate ") +
                             to_string(g.type));
      }
      best = std::max(best, through);  // optimistic stem rule
    }
    co[id] = best;
  }
  return co;
}

std::pair<std::vector<int64_t>, std::vector<int64_t>> scoap_controllability(
    const Circuit& c) {
  reject_bad(c);
  std::vector<int64_t> cc0(c.num_nets(), 0), cc1(c.num_nets(), 0);
  for (NetId id : c.level_order()) {
    const Net& n = c.net(id);
    if (n.driver == kNoGate) {
      cc0[id] = cc1[id] = 1;
      continue;
    }
    const Gate& g = c.gate(n.driver);
    switch (g.type) {
      case GateType::NOT:
        cc0[id] = kDepth + cc1[g.inputs[0]];
        cc1[id] = kDepth + cc0[g.inputs[0]];
        break;
      case GateType::BUF:
        cc0[id] = kDepth + cc0[g.inputs[0]];
        cc1[id] = kDepth + cc1[g.inputs[0]];
        break;
      case GateType::AND:
      case GateType::NAND: {
        int64_t all_one = 0;
        int64_t min_zero = std::numeric_limits<int64_t>::max();
        for (NetId in : g.inputs) {
          all_one += cc1[in];
          min_zero = std::min(min_zero, cc0[in]);
        }
        int64_t out1 = kDepth + all_one;   // AND = 1
        int64_t out0 = kDepth + min_zero;  // AND = 0
        if (g.type == GateType::NAND) std::swap(out0, out1);
        cc0[id] = out0;
        cc1[id] = out1;
        break;
      }
      case GateType::OR:
      case GateType::NOR: {
        int64_t all_zero = 0;
        int64_t min_one = std::numeric_limits<int64_t>::max();
        for (NetId in : g.inputs) {
          all_zero += cc0[in];
          min_one = std::min(min_one, cc1[in]);
        }
        int64_t out1 = kDepth + min_one;
        int64_t out0 = kDepth + all_zero;
        if (g.type == GateType::NOR) std::swap(out0, out1);
        cc0[id] = out0;
        cc1[id] = out1;
        break;
      }
      case GateType::XOR:
      case GateType::XNOR: {
        // Min-cost parity DP; matches the two-input closed forms exactly.
        int64_t even = 0;
        int64_t odd = std::numeric_limits<int64_t>::max() / 2;
        for (NetId in : g.inputs) {
          int64_t ne = std::min(even + cc0[in], odd + cc1[in]);
          int64_t no = std::min(odd + cc0[in], even + cc1[in]);
          even = ne;
          odd = no;
        }
        int64_t out1 = kDepth + odd;
        int64_t out0 = kDepth + even;
        if (g.type == GateType::XNOR) std::swap(out0, out1);
        cc0[id] = out0;
        cc1[id] = out1;
        break;
      }
      default:
        throw CircuitError(std::string("scoap_controllability: unsupported gate ") +
                           to_string(g.type));
    }
  }
  return {std::move(cc0), std::move(cc1)};
}

std::vector<int64_t> scoap_observability(const Circuit& c,
                                         const std::vector<int64_t>& cc0,
                                         const std::vector<int64_t>& cc1) {
  reject_bad(c);
  std::vector<int64_t> co(c.num_nets(), kUnobservable);
  const auto& order = c.level_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NetId id = *it;
    const Net& n = c.net(id);
    int64_t best = (n.is_po || n.is_ppo) ? 0 : kUnobservable;
    for (auto [gid, pin] : n.fanouts) {
      const Gate& g = c.gate(gid);
      int64_t out_co = co[g.output];
      if (out_co >= kUnobservable) continue;
      int64_t cost = out_co + kDepth;
      switch (g.type) {
        case GateType::NOT:
        case GateType::BUF:
          break;
        case GateType::AND:
        case GateType::NAND:
          for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (static_cast<int>(i) != pin) cost += cc1[g.inputs[i]];
          }
          break;
        case GateType::OR:
        case GateType::NOR:
          for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (static_cast<int>(i) != pin) cost += cc0[g.inputs[i]];
          }
          break;
        case GateType::XOR:
        case GateType::XNOR:
          for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (static_cast<int>(i) != pin) {
              cost += std::min(cc0[g.inputs[i]], cc1[g.inputs[i]]);
            }
          }
          break;
        default:
          throw CircuitError(std::string("scoap_observability: unsupported gate ") +
                             to_string(g.type));
      }
      best = std::min(best, cost);  // standard SCOAP stem rule
    }
    co[id] = best;
  }
  return co;
}

std::vector<double> normalize_distance(const std::vector<int>& distances) {
  if (distances.empty()) {
    throw std::invalid_argument("normalize_distance: empty input");
  }
  auto [mn_it, mx_it] = std::minmax_element(distances.begin(), distances.end());
  int mn = *mn_it, mx = *mx_it;
  std::vector<double> out(distances.size(), 0.0);
  if (mx == mn) return out;
  for (size_t i = 0; i < distances.size(); ++i) {
    out[i] = static_cast<double>(distances[i] - mn) / static_cast<double>(mx - mn);
  }
  return out;
}

Testability analyze_testability(const Circuit& c) {
  Testability t;
  auto cc = cop_controllability(c);
  auto co = cop_observability(c, cc);
  auto [cc0, cc1] = scoap_controllability(c);
  auto sco = scoap_observability(c, cc0, cc1);
  auto dist = shortest_pi_distance(c);
  t.dist_norm = normalize_distance(dist);
  t.records.resize(c.num_nets());
  for (NetId id = 0; id < c.num_nets(); ++id) {
    TestabilityRecord& r = t.records[id];
    r.cc = cc[id];
    r.co = co[id];
    r.cc0 = cc0[id];
    r.cc1 = cc1[id];
    r.scoap_co = sco[id];
    r.distance = dist[id];
    r.fanout = c.net(id).fanout_count();
  }
  return t;
}

std::vector<FeatureVector> build_features(const Circuit& c, const Testability& t) {
  if (static_cast<int>(t.records.size()) != c.num_nets()) {
    throw CircuitError("build_features: testability data does not match circuit");
  }
  std::vector<FeatureVector> features(c.num_nets());
  for (NetId id = 0; id < c.num_nets(); ++id) {
    const TestabilityRecord& r = t.records[id];
    FeatureVector& f = features[id];
    f.base[0] = r.cc;
    f.base[1] = r.co;
    f.base[2] = t.dist_norm[id];
    f.base[3 + static_cast<int>(c.net_type(id))] = 1.0;
    for (int i = 0; i < kBaseFeatureCount; ++i) f.extended[i] = f.base[i];
    f.extended[17] = static_cast<double>(r.cc0);
    f.extended[18] = static_cast<double>(r.cc1);
    f.extended[19] = static_cast<double>(r.scoap_co);
    f.extended[20] = static_cast<double>(r.fanout);
  }
  return features;
}

void write_feature_csv(std::ostream& out, const Circuit& c, const Testability& t) {
  out << "net,cc,co,dist_norm";
  for (int i = 0; i < kGateTypeCount; ++i) out << ",g" << i;
  out << ",cc0,cc1,scoap_co,fanout\n";
  auto features = build_features(c, t);
  std::ostringstream row;
  row.precision(17);
  for (NetId id = 0; id < c.num_nets(); ++id) {
    row.str("");
    row << c.net(id).name;
    for (int i = 0; i < kBaseFeatureCount; ++i) row << ',' << features[id].base[i];
    const TestabilityRecord& r = t.records[id];
    row << ',' << r.cc0 << ',' << r.cc1 << ',' << r.scoap_co << ',' << r.fanout;
    out << row.str() << '\n';
  }
}

}  // namespace atpg
