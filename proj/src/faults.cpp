#include "atpg/faults.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace atpg {

const char* to_string(FaultStatus s) {
  switch (s) {
    case FaultStatus::UNTRIED: return "UNTRIED";
    case FaultStatus::DETECTED: return "DETECTED";
    case FaultStatus::UNTESTABLE: return "UNTESTABLE";
    case FaultStatus::ABORTED: return "ABORTED";
  }
  return "?";
}

std::vector<Fault> enumerate_faults(const Circuit& circuit) {
  std::vector<Fault> faults;
  faults.reserve(2 * circuit.num_nets());
  for (NetId id = 0; id < circuit.num_nets(); ++id) {
    faults.push_back(Fault{id, 0});
    faults.push_back(Fault{id, 1});
  }
  return faults;
}

double detection_probability(const Fault& fault, double cc, double co) {
  return fault.stuck_at == 0 ? cc * co : (1.0 - cc) * co;
}

std::vector<Fault> rank_hard_faults(std::vector<Fault> faults, size_t k) {
  if (k == 0) throw std::invalid_argument("rank_hard_faults: k must be positive");
  std::stable_sort(faults.begin(), faults.end(), [](const Fault& a, const Fault& b) {
    if (a.p_detect != b.p_detect) return a.p_detect < b.p_detect;
    if (a.net != b.net) return a.net < b.net;
    return a.stuck_at < b.stuck_at;
  });
  if (faults.size() > k) faults.resize(k);
  return faults;
}

std::vector<Fault> sample_random_faults(const std::vector<Fault>& faults,
                                        size_t k, uint64_t seed) {
  std::vector<size_t> idx(faults.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  if (idx.size() > k) idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<Fault> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(faults[i]);
  return out;
}

}  // namespace atpg
