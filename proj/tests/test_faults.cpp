#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "atpg/bench.hpp"
#include "atpg/faults.hpp"
#include "atpg/testability.hpp"
#include "oracles.hpp"

using namespace atpg;

namespace {

Circuit c17() { return load_bench_file(std::string(FIXTURES_DIR) + "/c17.bench"); }

std::vector<Fault> scored_faults(const Circuit& c) {
  Testability t = analyze_testability(c);
  std::vector<Fault> faults = enumerate_faults(c);
  for (Fault& f : faults) {
    f.p_detect = detection_probability(f, t[f.net].cc, t[f.net].co);
  }
  return faults;
}

}  // namespace

TEST_CASE("enumerate_faults yields both polarities per net in order") {
  Circuit c = c17();
  auto faults = enumerate_faults(c);
  REQUIRE(faults.size() == 22);
  for (size_t i = 0; i < faults.size(); ++i) {
    CHECK(faults[i].net == static_cast<NetId>(i / 2));
    CHECK(faults[i].stuck_at == static_cast<int>(i % 2));
    CHECK(faults[i].status == FaultStatus::UNTRIED);
  }
}

TEST_CASE("detection probability formula") {
  Fault sa0{0, 0}, sa1{0, 1};
  CHECK(detection_probability(sa0, 0.75, 0.625) == doctest::Approx(0.46875));
  CHECK(detection_probability(sa1, 0.75, 0.625) == doctest::Approx(0.15625));
}

TEST_CASE("c17 hardest faults, hand-computed") {
  Circuit c = c17();
  auto hard = rank_hard_faults(scored_faults(c), 4);
  REQUIRE(hard.size() == 4);
  // p = 0.09375 for 6/0, 6/1, 11/1; next band p = 0.15625 starts at 1/0.
  CHECK(c.net(hard[0].net).name == "6");
  CHECK(hard[0].stuck_at == 0);
  CHECK(hard[0].p_detect == doctest::Approx(0.09375));
  CHECK(c.net(hard[1].net).name == "6");
  CHECK(hard[1].stuck_at == 1);
  CHECK(c.net(hard[2].net).name == "11");
  CHECK(hard[2].stuck_at == 1);
  CHECK(c.net(hard[3].net).name == "1");
  CHECK(hard[3].stuck_at == 0);
  CHECK(hard[3].p_detect == doctest::Approx(0.15625));
}

TEST_CASE("rank_hard_faults equals an independent full sort on random circuits") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    atpg::testing::RandomCircuitOptions opts;
    Circuit c = atpg::testing::random_circuit(opts, rng);
    auto faults = scored_faults(c);
    size_t k = 1 + rng() % faults.size();

    // Independent oracle: index sort with explicit comparator.
    std::vector<size_t> idx(faults.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      if (faults[a].p_detect != faults[b].p_detect)
        return faults[a].p_detect < faults[b].p_detect;
      if (faults[a].net != faults[b].net) return faults[a].net < faults[b].net;
      return faults[a].stuck_at < faults[b].stuck_at;
    });

    auto hard = rank_hard_faults(faults, k);
    REQUIRE(hard.size() == k);
    for (size_t i = 0; i < k; ++i) {
      CHECK(hard[i].net == faults[idx[i]].net);
      CHECK(hard[i].stuck_at == faults[idx[i]].stuck_at);
    }
  }
}

TEST_CASE("rank_hard_faults caps k at list size and rejects k == 0") {
  Circuit c = c17();
  auto faults = scored_faults(c);
  CHECK(rank_hard_faults(faults, 1000).size() == faults.size());
  CHECK_THROWS_AS(rank_hard_faults(faults, 0), std::invalid_argument);
}

TEST_CASE("sample_random_faults: deterministic, no duplicates, subset") {
  Circuit c = c17();
  auto faults = enumerate_faults(c);
  auto s1 = sample_random_faults(faults, 8, 99);
  auto s2 = sample_random_faults(faults, 8, 99);
  auto s3 = sample_random_faults(faults, 8, 100);
  REQUIRE(s1.size() == 8);
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].net == s2[i].net);
    CHECK(s1[i].stuck_at == s2[i].stuck_at);
  }
  bool differs = false;
  for (size_t i = 0; i < s1.size(); ++i) {
    differs |= !(s1[i] == s3[i]);
  }
  CHECK(differs);  // different seed, different sample (22 choose 8 is large)
  std::set<std::pair<NetId, int>> seen;
  for (const Fault& f : s1) {
    CHECK(seen.insert({f.net, f.stuck_at}).second);
    CHECK(std::find(faults.begin(), faults.end(), f) != faults.end());
  }
  // Oversized k returns the whole list.
  CHECK(sample_random_faults(faults, 1000, 1).size() == faults.size());
}
