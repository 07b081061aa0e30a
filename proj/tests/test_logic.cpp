#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "atpg/bench.hpp"
#include "atpg/logic.hpp"
#include "oracles.hpp"

using namespace atpg;
using atpg::testing::simulate_words;

namespace {

constexpr std::array<LogicValue, 5> kAll = {LogicValue::ZERO, LogicValue::ONE,
                                            LogicValue::X, LogicValue::D,
                                            LogicValue::DBAR};

Circuit c17() { return load_bench_file(std::string(FIXTURES_DIR) + "/c17.bench"); }

}  // namespace

TEST_CASE("component encode/decode is a bijection on the 5 values") {
  for (LogicValue v : kAll) {
    CHECK(encode_components(good_component(v), faulty_component(v)) == v);
  }
  CHECK(good_component(LogicValue::D) == 1);
  CHECK(faulty_component(LogicValue::D) == 0);
  CHECK(good_component(LogicValue::DBAR) == 0);
  CHECK(faulty_component(LogicValue::DBAR) == 1);
  // Mismatched known components with an X partner collapse to X.
  CHECK(encode_components(2, 0) == LogicValue::X);
  CHECK(encode_components(1, 2) == LogicValue::X);
}

TEST_CASE("eval_gate matches component-wise Boolean evaluation on all pairs") {
  // Independent oracle: evaluate good and faulty components through a
  // two-valued function where both are known, else X-rules.
  auto bool2 = [](GateType t, int a, int b) {
    switch (t) {
      case GateType::AND: return a & b;
      case GateType::NAND: return 1 - (a & b);
      case GateType::OR: return a | b;
      case GateType::NOR: return 1 - (a | b);
      case GateType::XOR: return a ^ b;
      case GateType::XNOR: return 1 - (a ^ b);
      default: return 0;
    }
  };
  auto eval3 = [&](GateType t, int a, int b) {
    if (a != 2 && b != 2) return bool2(t, a, b);
    // controlling-value shortcuts
    if ((t == GateType::AND || t == GateType::NAND) && (a == 0 || b == 0))
      return bool2(t, 0, 0);
    if ((t == GateType::OR || t == GateType::NOR) && (a == 1 || b == 1))
      return bool2(t, 1, 1);
    return 2;
  };
  for (GateType t : {GateType::AND, GateType::NAND, GateType::OR, GateType::NOR,
                     GateType::XOR, GateType::XNOR}) {
    for (LogicValue a : kAll) {
      for (LogicValue b : kAll) {
        std::array<LogicValue, 2> in = {a, b};
        LogicValue got = eval_gate(t, in);
        LogicValue want = encode_components(
            eval3(t, good_component(a), good_component(b)),
            eval3(t, faulty_component(a), faulty_component(b)));
        CAPTURE(to_string(t));
        CAPTURE(to_string(a));
        CAPTURE(to_string(b));
        CHECK(got == want);
      }
    }
  }
}

TEST_CASE("canonical D-calculus spot checks") {
  auto g2 = [](GateType t, LogicValue a, LogicValue b) {
    std::array<LogicValue, 2> in = {a, b};
    return eval_gate(t, in);
  };
  CHECK(g2(GateType::AND, LogicValue::D, LogicValue::ONE) == LogicValue::D);
  CHECK(g2(GateType::AND, LogicValue::D, LogicValue::ZERO) == LogicValue::ZERO);
  CHECK(g2(GateType::AND, LogicValue::D, LogicValue::DBAR) == LogicValue::ZERO);
  CHECK(g2(GateType::NAND, LogicValue::D, LogicValue::ONE) == LogicValue::DBAR);
  CHECK(g2(GateType::OR, LogicValue::DBAR, LogicValue::ZERO) == LogicValue::DBAR);
  CHECK(g2(GateType::OR, LogicValue::D, LogicValue::DBAR) == LogicValue::ONE);
  CHECK(g2(GateType::XOR, LogicValue::D, LogicValue::D) == LogicValue::ZERO);
  CHECK(g2(GateType::XOR, LogicValue::D, LogicValue::DBAR) == LogicValue::ONE);
  // X-pessimism: XOR(X, D) is X even though a case split gives {D, DBAR}.
  CHECK(g2(GateType::XOR, LogicValue::X, LogicValue::D) == LogicValue::X);
  CHECK(g2(GateType::AND, LogicValue::X, LogicValue::D) == LogicValue::X);
  std::array<LogicValue, 1> one = {LogicValue::D};
  CHECK(eval_gate(GateType::NOT, one) == LogicValue::DBAR);
  CHECK(eval_gate(GateType::BUF, one) == LogicValue::D);
}

TEST_CASE("eval_gate rejects non-logic gate types") {
  std::array<LogicValue, 1> in = {LogicValue::ZERO};
  CHECK_THROWS_AS(eval_gate(GateType::BAD, in), CircuitError);
  CHECK_THROWS_AS(eval_gate(GateType::PI, in), CircuitError);
  CHECK_THROWS_AS(eval_gate(GateType::DFF, in), CircuitError);
}

TEST_CASE("ValueState activates and propagates a fault on c17") {
  Circuit c = c17();
  // Fault: net 10 stuck-at-1.  Good value of 10 must be 0, i.e. 1=1 and 3=1.
  Fault f{c.find_net("10"), 1};
  ValueState st(c, f);
  CHECK(st.value(f.net) == LogicValue::X);
  st.assign(c.find_net("1"), LogicValue::ONE);
  st.assign(c.find_net("3"), LogicValue::ONE);
  CHECK(st.fault_activated());
  CHECK(st.value(f.net) == LogicValue::DBAR);  // good 0, faulty 1
  CHECK_FALSE(st.d_frontier().empty());
  // Propagate through 22 = NAND(10, 16): need 16 = 1. 16 = NAND(2, 11),
  // 11 = NAND(3, 6); set 6=0 so 11=1, then 2=0 gives 16=1.
  st.assign(c.find_net("6"), LogicValue::ZERO);
  st.assign(c.find_net("2"), LogicValue::ZERO);
  CHECK(st.value(c.find_net("16")) == LogicValue::ONE);
  CHECK(st.value(c.find_net("22")) == LogicValue::D);
  CHECK(st.d_at_output());
}

TEST_CASE("ValueState reports a blocked fault") {
  Circuit c = c17();
  Fault f{c.find_net("10"), 1};
  ValueState st(c, f);
  st.assign(c.find_net("1"), LogicValue::ZERO);  // good 10 = 1 = stuck value
  CHECK(st.fault_blocked());
  CHECK_FALSE(st.fault_activated());
}

TEST_CASE("assign X un-assigns and re-propagates") {
  Circuit c = c17();
  Fault f{c.find_net("10"), 1};
  ValueState st(c, f);
  NetId n1 = c.find_net("1"), n3 = c.find_net("3");
  st.assign(n1, LogicValue::ONE);
  st.assign(n3, LogicValue::ONE);
  CHECK(st.fault_activated());
  st.assign(n3, LogicValue::X);
  CHECK(st.value(f.net) == LogicValue::X);
  CHECK_FALSE(st.fault_activated());
  st.assign(n3, LogicValue::ONE);
  CHECK(st.fault_activated());
}

TEST_CASE("incremental assign agrees with evaluate_full on random circuits") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    atpg::testing::RandomCircuitOptions opts;
    opts.num_inputs = 6;
    opts.num_gates = 25;
    Circuit c = atpg::testing::random_circuit(opts, rng);
    Fault f{static_cast<NetId>(rng() % c.num_nets()), static_cast<int>(rng() % 2)};
    ValueState st(c, f);
    std::vector<std::pair<NetId, LogicValue>> assigned;
    for (int step = 0; step < 12; ++step) {
      NetId in = c.inputs()[rng() % c.inputs().size()];
      LogicValue v = std::array<LogicValue, 3>{
          LogicValue::ZERO, LogicValue::ONE, LogicValue::X}[rng() % 3];
      st.assign(in, v);
      std::erase_if(assigned, [&](auto& p) { return p.first == in; });
      if (v != LogicValue::X) assigned.push_back({in, v});
      auto full = evaluate_full(c, &f, assigned);
      for (NetId id = 0; id < c.num_nets(); ++id) {
        CAPTURE(trial);
        CAPTURE(step);
        CAPTURE(id);
        CHECK(st.value(id) == full[id]);
      }
    }
  }
}

TEST_CASE("d_frontier definition holds after arbitrary assignments") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    atpg::testing::RandomCircuitOptions opts;
    opts.num_inputs = 6;
    opts.num_gates = 25;
    Circuit c = atpg::testing::random_circuit(opts, rng);
    Fault f{static_cast<NetId>(rng() % c.num_nets()), static_cast<int>(rng() % 2)};
    ValueState st(c, f);
    for (int step = 0; step < 8; ++step) {
      NetId in = c.inputs()[rng() % c.inputs().size()];
      st.assign(in, rng() % 2 ? LogicValue::ONE : LogicValue::ZERO);
    }
    for (GateId gid = 0; gid < c.num_gates(); ++gid) {
      const Gate& g = c.gate(gid);
      bool has_d = false;
      for (NetId in : g.inputs) has_d |= is_d(st.value(in));
      bool expect = has_d && st.value(g.output) == LogicValue::X;
      CHECK(st.d_frontier().count(gid) == (expect ? 1u : 0u));
    }
  }
}

TEST_CASE("fault_simulate matches the word-parallel oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    atpg::testing::RandomCircuitOptions opts;
    opts.num_inputs = 7;
    opts.num_gates = 30;
    Circuit c = atpg::testing::random_circuit(opts, rng);
    std::vector<Fault> faults = enumerate_faults(c);
    std::vector<InputVector> vectors;
    for (int v = 0; v < 12; ++v) {
      InputVector vec(c.inputs().size());
      for (auto& x : vec) x = rng() % 2 ? LogicValue::ONE : LogicValue::ZERO;
      vectors.push_back(vec);
    }
    CoverageReport rep = fault_simulate(c, vectors, faults);
    REQUIRE(rep.rows.size() == faults.size());
    int detected = 0;
    for (size_t i = 0; i < faults.size(); ++i) {
      bool oracle = false;
      for (const auto& vec : vectors) {
        oracle |= atpg::testing::vector_detects(c, faults[i], vec);
      }
      CHECK(rep.rows[i].detected == oracle);
      detected += oracle;
    }
    CHECK(rep.detected == detected);
    CHECK(rep.coverage_percent ==
          doctest::Approx(100.0 * detected / faults.size()));
  }
}

TEST_CASE("fault_simulate rejects incomplete vectors and handles empty fault list") {
  Circuit c = c17();
  InputVector bad(c.inputs().size(), LogicValue::ONE);
  bad[2] = LogicValue::X;
  CHECK_THROWS(fault_simulate(c, {bad}, enumerate_faults(c)));
  CoverageReport rep = fault_simulate(c, {}, {});
  CHECK(rep.zero_faults);
  CHECK(rep.coverage_percent == 100.0);
}

TEST_CASE("good components of evaluate_full match word simulation on c17") {
  Circuit c = c17();
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::pair<NetId, LogicValue>> as;
    std::vector<uint64_t> words(c.inputs().size());
    for (size_t i = 0; i < c.inputs().size(); ++i) {
      bool one = rng() % 2;
      as.push_back({c.inputs()[i], one ? LogicValue::ONE : LogicValue::ZERO});
      words[i] = one ? ~0ULL : 0ULL;
    }
    auto fv = evaluate_full(c, nullptr, as);
    auto wv = simulate_words(c, words);
    for (NetId id = 0; id < c.num_nets(); ++id) {
      CHECK(good_component(fv[id]) == static_cast<int>(wv[id] & 1));
    }
  }
}
