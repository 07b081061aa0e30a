#pragma once

#include <string>
#include <string_view>

#include "atpg/circuit.hpp"

namespace atpg {

class BenchParseError : public CircuitError {
 public:
  BenchParseError(int line, int column, const std::string& msg)
      : CircuitError("line " + std::to_string(line) + ", col " +
                     std::to_string(column) + ": " + msg),
        line(line), column(column) {}
  int line;
  int column;
};

// Parses a BENCH-format netlist. '#' comments, blank lines, INPUT(x),
// OUTPUT(x), out = GATE(in, ...). Gate keywords are case-insensitive;
// unknown keywords become BAD gates. DFFs split into PPI/PPO pairs;
// multi-input XOR/XNOR decompose left-associatively into 2-input gates.
Circuit parse_bench(std::string_view text);

// Canonical form: INPUT lines, OUTPUT lines, then gates in level order,
// uppercase keywords, one statement per line. Reparsing yields an
// isomorphic circuit.
std::string serialize_bench(const Circuit& circuit);

Circuit load_bench_file(const std::string& path);

}  // namespace atpg
