#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atpg/circuit.hpp"

namespace atpg {

enum class FaultStatus : uint8_t { UNTRIED, DETECTED, UNTESTABLE, ABORTED };

const char* to_string(FaultStatus s);

// Stem stuck-at fault: one pair per net, no branch faults, no collapsing.
struct Fault {
  NetId net = kNoNet;
  int stuck_at = 0;  // 0 or 1
  double p_detect = 0.0;
  FaultStatus status = FaultStatus::UNTRIED;

  friend bool operator==(const Fault& a, const Fault& b) {
    return a.net == b.net && a.stuck_at == b.stuck_at;
  }
};

// Both polarities on every net, ordered by (net, stuck_at).
std::vector<Fault> enumerate_faults(const Circuit& circuit);

// Eq-style COP estimate: s-a-0 -> cc*co, s-a-1 -> (1-cc)*co.
double detection_probability(const Fault& fault, double cc, double co);

// Stable ascending sort by p_detect, ties by (net, stuck_at); first k.
// Throws std::invalid_argument when k == 0.
std::vector<Fault> rank_hard_faults(std::vector<Fault> faults, size_t k);

// Uniform sample without replacement, deterministic under seed.
std::vector<Fault> sample_random_faults(const std::vector<Fault>& faults,
                                        size_t k, uint64_t seed);

}  // namespace atpg
