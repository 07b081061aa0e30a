#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "atpg/bench.hpp"
#include "atpg/podem.hpp"
#include "atpg/testability.hpp"
#include "oracles.hpp"

using namespace atpg;

namespace {

Circuit c17() { return load_bench_file(std::string(FIXTURES_DIR) + "/c17.bench"); }

CopHeuristic cop_for(const Circuit& c) {
  return CopHeuristic(cop_controllability(c));
}

InputVector filled_zero(InputVector v) {
  for (LogicValue& x : v) {
    if (x == LogicValue::X) x = LogicValue::ZERO;
  }
  return v;
}

}  // namespace

TEST_CASE("backtrace flips the target through inverting gates") {
  Circuit c = parse_bench("INPUT(a)\nOUTPUT(y)\nn = NOT(a)\ny = NOT(n)");
  Fault f{c.find_net("y"), 0};
  ValueState st(c, f);
  CopHeuristic h = cop_for(c);
  auto [pi, v] = backtrace(c, st, c.find_net("y"), true, h);
  CHECK(pi == c.find_net("a"));
  CHECK(v == LogicValue::ONE);  // two inversions cancel
  auto [pi2, v2] = backtrace(c, st, c.find_net("n"), true, h);
  CHECK(pi2 == c.find_net("a"));
  CHECK(v2 == LogicValue::ZERO);
}

TEST_CASE("backtrace picks the heuristically best X input, ties to lowest id") {
  Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)");
  Fault f{c.find_net("y"), 0};
  ValueState st(c, f);
  NetId a = c.find_net("a"), b = c.find_net("b");
  SUBCASE("prefers the higher score") {
    std::vector<double> p(c.num_nets(), 0.0);
    p[b] = 1.0;
    NetScoreHeuristic h(p);
    auto [pi, v] = backtrace(c, st, c.find_net("y"), true, h);
    CHECK(pi == b);
    CHECK(v == LogicValue::ONE);
  }
  SUBCASE("tie goes to the lowest net id") {
    NetScoreHeuristic h(std::vector<double>(c.num_nets(), 0.5));
    auto [pi, v] = backtrace(c, st, c.find_net("y"), true, h);
    CHECK(pi == std::min(a, b));
  }
  SUBCASE("assigned inputs are skipped") {
    st.assign(a, LogicValue::ONE);
    std::vector<double> p(c.num_nets(), 0.0);
    p[a] = 1.0;  // would win, but it is no longer X
    NetScoreHeuristic h(p);
    auto [pi, v] = backtrace(c, st, c.find_net("y"), true, h);
    CHECK(pi == b);
  }
  SUBCASE("assigned objective is rejected") {
    st.assign(a, LogicValue::ONE);
    CHECK_THROWS_AS(backtrace(c, st, a, true, cop_for(c)), CircuitError);
  }
}

TEST_CASE("backtrace through XOR uses known-input parity") {
  Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)");
  Fault f{c.find_net("y"), 0};
  ValueState st(c, f);
  st.assign(c.find_net("a"), LogicValue::ONE);
  auto [pi, v] = backtrace(c, st, c.find_net("y"), true, cop_for(c));
  CHECK(pi == c.find_net("b"));
  CHECK(v == LogicValue::ZERO);  // 1 ^ 0 = 1
  auto [pi2, v2] = backtrace(c, st, c.find_net("y"), false, cop_for(c));
  CHECK(v2 == LogicValue::ONE);
}

TEST_CASE("backtrace records the walked nets") {
  Circuit c = parse_bench("INPUT(a)\nOUTPUT(y)\nn = NOT(a)\ny = NOT(n)");
  Fault f{c.find_net("y"), 0};
  ValueState st(c, f);
  std::vector<NetId> trail;
  backtrace(c, st, c.find_net("y"), true, cop_for(c), &trail);
  REQUIRE(trail.size() == 3);
  CHECK(trail[0] == c.find_net("y"));
  CHECK(trail[1] == c.find_net("n"));
  CHECK(trail[2] == c.find_net("a"));
}

TEST_CASE("c17: full fault list fully detected, vectors verified") {
  Circuit c = c17();
  CopHeuristic h = cop_for(c);
  auto faults = enumerate_faults(c);
  for (const Fault& f : faults) {
    AtpgResult r = generate_test(c, f, h);
    CAPTURE(c.net(f.net).name);
    CAPTURE(f.stuck_at);
    REQUIRE(r.outcome == AtpgOutcome::DETECTED);
    CHECK(atpg::testing::vector_detects(c, f, filled_zero(r.vector)));
    CHECK(r.backtraces == r.decisions);
    CHECK(r.backtraces >= 1);
  }
}

TEST_CASE("redundant net: untestable fault proven, abort under limit 0") {
  // y is constantly 1, so y stuck-at-1 never changes any output.
  Circuit c = parse_bench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(z)\nn = NOT(a)\ny = OR(a, n)\nz = AND(y, b)");
  Fault f{c.find_net("y"), 1};
  CHECK_FALSE(atpg::testing::exhaustively_testable(c, f));
  CopHeuristic h = cop_for(c);
  AtpgResult r = generate_test(c, f, h);
  CHECK(r.outcome == AtpgOutcome::UNTESTABLE);
  CHECK(r.backtracks >= 1);
  AtpgResult r0 = generate_test(c, f, h, /*backtrack_limit=*/0);
  CHECK(r0.outcome == AtpgOutcome::ABORTED);
}

TEST_CASE("soundness and completeness vs exhaustive oracle on random circuits") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    atpg::testing::RandomCircuitOptions opts;
    opts.num_inputs = 5 + static_cast<int>(rng() % 5);
    opts.num_gates = 10 + static_cast<int>(rng() % 30);
    Circuit c = atpg::testing::random_circuit(opts, rng);
    CopHeuristic h = cop_for(c);
    for (const Fault& f : enumerate_faults(c)) {
      AtpgResult r = generate_test(c, f, h);
      CAPTURE(trial);
      CAPTURE(f.net);
      CAPTURE(f.stuck_at);
      if (r.outcome == AtpgOutcome::DETECTED) {
        CHECK(atpg::testing::vector_detects(c, f, filled_zero(r.vector)));
      } else if (r.outcome == AtpgOutcome::UNTESTABLE) {
        CHECK_FALSE(atpg::testing::exhaustively_testable(c, f));
      }
      // ABORTED makes no claim.
    }
  }
}

TEST_CASE("heuristic scale invariance: affine score transform, identical counts") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    atpg::testing::RandomCircuitOptions opts;
    Circuit c = atpg::testing::random_circuit(opts, rng);
    std::vector<double> p(c.num_nets());
    for (double& x : p) x = std::uniform_real_distribution<double>(0, 1)(rng);
    std::vector<double> q(p);
    for (double& x : q) x = 3.25 * x + 11.0;
    NetScoreHeuristic h1(p), h2(q);
    auto faults = enumerate_faults(c);
    CampaignReport a = run_campaign(c, faults, h1);
    CampaignReport b = run_campaign(c, faults, h2);
    CHECK(a.total_backtraces == b.total_backtraces);
    CHECK(a.total_backtracks == b.total_backtracks);
    CHECK(a.detected == b.detected);
    for (size_t i = 0; i < faults.size(); ++i) {
      CHECK(a.results[i].backtracks == b.results[i].backtracks);
      CHECK(a.results[i].vector == b.results[i].vector);
    }
  }
}

TEST_CASE("run_campaign: totals, coverage, and parallel determinism") {
  Circuit c = c17();
  CopHeuristic h = cop_for(c);
  auto faults = enumerate_faults(c);
  CampaignReport serial = run_campaign(c, faults, h, kDefaultBacktrackLimit, 1);
  CampaignReport parallel = run_campaign(c, faults, h, kDefaultBacktrackLimit, 8);

  CHECK(serial.detected == static_cast<int>(faults.size()));
  CHECK(serial.coverage_percent == 100.0);
  CHECK(serial.aborted == 0);
  long bt = 0, bk = 0;
  for (const auto& r : serial.results) {
    bt += r.backtraces;
    bk += r.backtracks;
  }
  CHECK(serial.total_backtraces == bt);
  CHECK(serial.total_backtracks == bk);
  CHECK(serial.work() == bt + bk);

  REQUIRE(parallel.results.size() == serial.results.size());
  for (size_t i = 0; i < faults.size(); ++i) {
    CHECK(parallel.results[i].outcome == serial.results[i].outcome);
    CHECK(parallel.results[i].backtraces == serial.results[i].backtraces);
    CHECK(parallel.results[i].backtracks == serial.results[i].backtracks);
    CHECK(parallel.results[i].vector == serial.results[i].vector);
  }

  CampaignReport empty = run_campaign(c, {}, h);
  CHECK(empty.zero_faults);
  CHECK(empty.coverage_percent == 100.0);
}

TEST_CASE("generated vectors fault-simulate to full coverage on c17") {
  Circuit c = c17();
  CopHeuristic h = cop_for(c);
  auto faults = enumerate_faults(c);
  CampaignReport rep = run_campaign(c, faults, h);
  std::vector<InputVector> vectors;
  for (const auto& r : rep.results) {
    if (r.outcome == AtpgOutcome::DETECTED) vectors.push_back(filled_zero(r.vector));
  }
  CoverageReport cov = fault_simulate(c, vectors, faults);
  CHECK(cov.coverage_percent == 100.0);
}
