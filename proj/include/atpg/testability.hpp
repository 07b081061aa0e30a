#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "atpg/circuit.hpp"

namespace atpg {

// Sentinel for nets with no path to any PO; large enough that sums of a few
// of these still fit in int64.
inline constexpr int64_t kUnobservable = 1'000'000'000LL;

struct TestabilityRecord {
  double cc = 0.0;       // COP P(net = 1)
  double co = 0.0;       // COP observability
  int64_t cc0 = 0;       // SCOAP 0-controllability
  int64_t cc1 = 0;       // SCOAP 1-controllability
  int64_t scoap_co = 0;  // SCOAP observability
  int distance = 0;      // gate hops from nearest PI
  int fanout = 0;
};

// Base features: [cc, co, normalized distance, 14-bit one-hot gate type].
// Extended appends [cc0, cc1, scoap_co, fanout].
struct FeatureVector {
  std::array<double, 17> base{};
  std::array<double, 21> extended{};
};

inline constexpr int kBaseFeatureCount = 17;
inline constexpr int kExtendedFeatureCount = 21;

// Forward level-order pass; PIs/PPIs at 0.5. Independence assumption; exact
// on fanout-free circuits. Throws on BAD gates.
std::vector<double> cop_controllability(const Circuit& circuit);

// Backward pass; POs/PPOs at 1. Fanout stems take the max over branches.
std::vector<double> cop_observability(const Circuit& circuit,
                                      const std::vector<double>& cc);

// Forward pass; PIs/PPIs at (1, 1); every gate has depth 1.
// Returns (cc0, cc1) per net.
std::pair<std::vector<int64_t>, std::vector<int64_t>> scoap_controllability(
    const Circuit& circuit);

// Backward pass; POs/PPOs at 0. Fanout stems take the min over branches.
std::vector<int64_t> scoap_observability(const Circuit& circuit,
                                         const std::vector<int64_t>& cc0,
                                         const std::vector<int64_t>& cc1);

// Min-max normalization into [0,1]; all-equal input maps to all zeros.
// Throws std::invalid_argument on an empty input.
std::vector<double> normalize_distance(const std::vector<int>& distances);

struct Testability {
  std::vector<TestabilityRecord> records;
  std::vector<double> dist_norm;

  const TestabilityRecord& operator[](NetId id) const { return records[id]; }
};

Testability analyze_testability(const Circuit& circuit);

std::vector<FeatureVector> build_features(const Circuit& circuit,
                                          const Testability& t);

// CSV: net,cc,co,dist_norm,g0..g13,cc0,cc1,scoap_co,fanout — one row per net
// in id order.
void write_feature_csv(std::ostream& out, const Circuit& circuit,
                       const Testability& t);

}  // namespace atpg
