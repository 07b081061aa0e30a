#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "atpg/bench.hpp"
#include "atpg/datagen.hpp"
#include "atpg/testability.hpp"

using namespace atpg;

namespace {

Circuit c17() { return load_bench_file(std::string(FIXTURES_DIR) + "/c17.bench"); }

CircuitData synthetic_circuit(const std::string& name, int num_nets,
                              int rows_with_data) {
  CircuitData d;
  d.name = name;
  d.features.resize(num_nets);
  d.labels = NetLabelAccumulator(num_nets);
  for (int i = 0; i < rows_with_data; ++i) {
    d.labels.f_total[i] = 4;
    d.labels.f_success[i] = i % 5;
  }
  return d;
}

}  // namespace

TEST_CASE("LabelCollector scores walks by decision survival") {
  LabelCollector lc(4);
  std::vector<NetId> w0 = {0, 1};
  std::vector<NetId> w1 = {1, 2};
  std::vector<NetId> w2 = {3};
  lc.walk(w0, 0);
  lc.walk(w1, 1);
  lc.walk(w2, 2);
  lc.reversed(1);
  lc.finish_fault();
  const NetLabelAccumulator& acc = lc.accumulator();
  CHECK(acc.f_total[0] == 1);
  CHECK(acc.f_success[0] == 1);
  CHECK(acc.f_total[1] == 2);
  CHECK(acc.f_success[1] == 1);  // survived in w0, reversed in w1
  CHECK(acc.f_total[2] == 1);
  CHECK(acc.f_success[2] == 0);
  CHECK(acc.f_success[3] == 1);
  CHECK(acc.p(1) == doctest::Approx(0.5));
  CHECK(acc.f_fail(1) == 1);
  CHECK(acc.has_data(3));
}

TEST_CASE("LabelCollector separates successive faults") {
  LabelCollector lc(2);
  std::vector<NetId> w = {0};
  lc.walk(w, 0);
  lc.finish_fault();
  lc.walk(w, 0);  // decision ids restart per fault
  lc.reversed(0);
  lc.finish_fault();
  CHECK(lc.accumulator().f_total[0] == 2);
  CHECK(lc.accumulator().f_success[0] == 1);
}

TEST_CASE("NetLabelAccumulator::merge adds counts") {
  NetLabelAccumulator a(2), b(2);
  a.f_total[0] = 3;
  a.f_success[0] = 1;
  b.f_total[0] = 2;
  b.f_success[0] = 2;
  b.f_total[1] = 1;
  a.merge(b);
  CHECK(a.f_total[0] == 5);
  CHECK(a.f_success[0] == 3);
  CHECK(a.f_total[1] == 1);
  CHECK(a.p(0) == doctest::Approx(0.6));
}

TEST_CASE("generate_labels: probabilities in range, deterministic") {
  Circuit c = c17();
  Testability t = analyze_testability(c);
  NetLabelAccumulator acc1 = generate_labels(c, t, 22);
  NetLabelAccumulator acc2 = generate_labels(c, t, 22);
  CHECK(acc1.f_total == acc2.f_total);
  CHECK(acc1.f_success == acc2.f_success);
  bool any = false;
  for (NetId id = 0; id < c.num_nets(); ++id) {
    if (!acc1.has_data(id)) continue;
    any = true;
    CHECK(acc1.p(id) >= 0.0);
    CHECK(acc1.p(id) <= 1.0);
    CHECK(acc1.f_success[id] <= acc1.f_total[id]);
  }
  CHECK(any);
}

TEST_CASE("backtrack-free circuit yields all-1 labels") {
  Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)");
  Testability t = analyze_testability(c);
  NetLabelAccumulator acc = generate_labels(c, t, 6);
  for (NetId id = 0; id < c.num_nets(); ++id) {
    if (acc.has_data(id)) CHECK(acc.p(id) == 1.0);
  }
}

TEST_CASE("assemble_training_set: holdout excluded, folds balanced, deterministic") {
  std::vector<CircuitData> circuits = {synthetic_circuit("alpha", 20, 13),
                                       synthetic_circuit("beta", 15, 9),
                                       synthetic_circuit("gamma", 25, 11)};
  TrainingSet ts = assemble_training_set(circuits, "beta", 5, 1234);
  CHECK(ts.holdout == "beta");
  CHECK(ts.k == 5);
  CHECK(ts.rows.size() == 13 + 11);
  REQUIRE(ts.fold.size() == ts.rows.size());
  std::vector<int> per_fold(5, 0);
  for (size_t i = 0; i < ts.rows.size(); ++i) {
    CHECK(ts.rows[i].circuit != "beta");
    CHECK(ts.rows[i].f_total > 0);
    CHECK(ts.rows[i].p ==
          doctest::Approx(static_cast<double>(ts.rows[i].f_success) /
                          ts.rows[i].f_total));
    REQUIRE(ts.fold[i] >= 0);
    REQUIRE(ts.fold[i] < 5);
    ++per_fold[ts.fold[i]];
  }
  auto [mn, mx] = std::minmax_element(per_fold.begin(), per_fold.end());
  CHECK(*mx - *mn <= 1);

  TrainingSet again = assemble_training_set(circuits, "beta", 5, 1234);
  REQUIRE(again.rows.size() == ts.rows.size());
  for (size_t i = 0; i < ts.rows.size(); ++i) {
    CHECK(again.rows[i].circuit == ts.rows[i].circuit);
    CHECK(again.rows[i].net == ts.rows[i].net);
    CHECK(again.fold[i] == ts.fold[i]);
  }
  TrainingSet other = assemble_training_set(circuits, "beta", 5, 99);
  bool differs = false;
  for (size_t i = 0; i < ts.rows.size(); ++i) {
    differs |= other.rows[i].net != ts.rows[i].net || other.fold[i] != ts.fold[i];
  }
  CHECK(differs);
}

TEST_CASE("assemble_training_set input validation") {
  std::vector<CircuitData> circuits = {synthetic_circuit("alpha", 10, 6),
                                       synthetic_circuit("beta", 10, 6)};
  CHECK_THROWS(assemble_training_set({circuits[0]}, "", 2, 0));
  CHECK_THROWS(assemble_training_set(circuits, "nope", 2, 0));
  CHECK_THROWS(assemble_training_set(circuits, "beta", 1, 0));
  CHECK_THROWS(assemble_training_set(circuits, "beta", 7, 0));  // k > rows
}

TEST_CASE("circuit-level meta labels: SVR wins strictly, ties to 0") {
  std::map<std::string, std::pair<long, long>> work = {
      {"a", {100, 50}},   // SVR smaller -> 1
      {"b", {50, 100}},   // HybNN smaller -> 0
      {"c", {70, 70}},    // tie -> 0
  };
  auto labels = generate_meta_labels(work);
  CHECK(labels.at("a") == 1);
  CHECK(labels.at("b") == 0);
  CHECK(labels.at("c") == 0);
}

TEST_CASE("fine-grained meta labels: per-net fewer reversed walks wins") {
  NetLabelAccumulator hyb(3), svr(3);
  // net 0: hybnn fails 2, svr fails 1 -> 1
  hyb.f_total[0] = 5; hyb.f_success[0] = 3;
  svr.f_total[0] = 4; svr.f_success[0] = 3;
  // net 1: hybnn fails 0, svr fails 2 -> 0
  hyb.f_total[1] = 2; hyb.f_success[1] = 2;
  svr.f_total[1] = 3; svr.f_success[1] = 1;
  // net 2: tie (1 vs 1) -> 0
  hyb.f_total[2] = 2; hyb.f_success[2] = 1;
  svr.f_total[2] = 5; svr.f_success[2] = 4;
  auto labels = generate_meta_labels_fine(hyb, svr);
  CHECK(labels == std::vector<int>{1, 0, 0});
}
