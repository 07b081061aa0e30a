#include "atpg/bench.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace atpg {
namespace {

struct Statement {
  int line;
  std::string lhs;                  // empty for INPUT/OUTPUT
  std::string keyword;              // INPUT, OUTPUT, or gate keyword
  std::vector<std::string> args;
};

class LineScanner {
 public:
  LineScanner(std::string_view text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }
  std::string identifier() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
          c == ',' || c == '=') {
        break;
      }
      ++pos_;
    }
    if (pos_ == start) fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw BenchParseError(line_, static_cast<int>(pos_) + 1, msg);
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;
  int line_;
};

bool is_logic_keyword(std::string_view up) {
  return up == "NOT" || up == "AND" || up == "NAND" || up == "OR" ||
         up == "NOR" || up == "XOR" || up == "XNOR" || up == "BUF";
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Circuit parse_bench(std::string_view text) {
  std::vector<Statement> stmts;
  {
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view raw = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (auto hash = raw.find('#'); hash != std::string_view::npos) {
        raw = raw.substr(0, hash);
      }
      LineScanner sc(raw, line_no);
      if (sc.at_end()) {
        if (pos > text.size()) break;
        continue;
      }
      Statement st;
      st.line = line_no;
      std::string first = sc.identifier();
      if (sc.peek() == '(') {
        // INPUT(x) / OUTPUT(x)
        std::string kw = upper(first);
        if (kw != "INPUT" && kw != "OUTPUT") {
          sc.fail("expected INPUT, OUTPUT, or an assignment");
        }
        st.keyword = kw;
        sc.expect('(');
        st.args.push_back(sc.identifier());
        sc.expect(')');
      } else {
        st.lhs = first;
        sc.expect('=');
        st.keyword = upper(sc.identifier());
        sc.expect('(');
        st.args.push_back(sc.identifier());
        while (sc.peek() == ',') {
          sc.expect(',');
          st.args.push_back(sc.identifier());
        }
        sc.expect(')');
      }
      if (!sc.at_end()) sc.fail("trailing characters after statement");
      stmts.push_back(std::move(st));
      if (pos > text.size()) break;
    }
  }

  CircuitBuilder b;
  std::unordered_set<std::string> defined;
  std::vector<std::string> ppo_names;  // DFF data inputs, marked after parse
  auto define = [&](const std::string& name, int line) {
    if (!defined.insert(name).second) {
      throw BenchParseError(line, 1, "duplicate definition of net '" + name + "'");
    }
  };
  auto fresh_name = [&](const std::string& base) {
    int k = 0;
    std::string name;
    do {
      name = base + "$x" + std::to_string(k++);
    } while (b.net_id(name) != kNoNet);
    return name;
  };

  for (const Statement& st : stmts) {
    if (st.keyword == "INPUT") {
      NetId id = b.add_net(st.args[0]);
      define(st.args[0], st.line);
      b.mark_input(id);
    } else if (st.keyword == "OUTPUT") {
      NetId id = b.add_net(st.args[0]);
      b.mark_output(id);
    } else {
      NetId out = b.add_net(st.lhs);
      define(st.lhs, st.line);
      std::vector<NetId> ins;
      ins.reserve(st.args.size());
      for (const std::string& a : st.args) ins.push_back(b.add_net(a));

      if (st.keyword == "DFF") {
        if (ins.size() != 1) {
          throw BenchParseError(st.line, 1, "DFF takes exactly one input");
        }
        // Full-scan decomposition: output becomes a PPI, data input a PPO.
        b.mark_ppi(out);
        b.add_dff_pair(out, ins[0]);
        ppo_names.push_back(st.args[0]);
        continue;
      }

      GateType type;
      if (st.keyword == "NOT") type = GateType::NOT;
      else if (st.keyword == "BUF" || st.keyword == "BUFF") type = GateType::BUF;
      else if (st.keyword == "AND") type = GateType::AND;
      else if (st.keyword == "NAND") type = GateType::NAND;
      else if (st.keyword == "OR") type = GateType::OR;
      else if (st.keyword == "NOR") type = GateType::NOR;
      else if (st.keyword == "XOR") type = GateType::XOR;
      else if (st.keyword == "XNOR") type = GateType::XNOR;
      else type = GateType::BAD;

      if ((type == GateType::NOT || type == GateType::BUF) && ins.size() != 1) {
        throw BenchParseError(st.line, 1, st.keyword + " takes exactly one input");
      }
      if ((type == GateType::XOR || type == GateType::XNOR) && ins.size() < 2) {
        throw BenchParseError(st.line, 1, st.keyword + " needs at least two inputs");
      }
      if (ins.empty()) {
        throw BenchParseError(st.line, 1, st.keyword + " needs at least one input");
      }

      if ((type == GateType::XOR || type == GateType::XNOR) && ins.size() > 2) {
        // Left-associative 2-input decomposition; the original type applies
        // to the final gate so XNOR keeps its inverted-parity semantics.
        NetId acc = ins[0];
        for (size_t i = 1; i + 1 < ins.size(); ++i) {
          std::string mid_name = fresh_name(st.lhs);
          NetId mid = b.add_net(mid_name);
          defined.insert(mid_name);
          b.add_gate(GateType::XOR, {acc, ins[i]}, mid);
          acc = mid;
        }
        b.add_gate(type, {acc, ins.back()}, out);
      } else {
        b.add_gate(type, std::move(ins), out);
      }
    }
  }

  for (const std::string& name : ppo_names) {
    b.mark_ppo(b.net_id(name));
  }
  return b.build();
}

std::string serialize_bench(const Circuit& c) {
  std::ostringstream out;
  for (NetId id : c.inputs()) {
    if (c.net(id).is_pi) out << "INPUT(" << c.net(id).name << ")\n";
  }
  for (NetId id : c.outputs()) {
    if (c.net(id).is_po) out << "OUTPUT(" << c.net(id).name << ")\n";
  }
  for (auto [ppi, ppo] : c.dff_pairs()) {
    out << c.net(ppi).name << " = DFF(" << c.net(ppo).name << ")\n";
  }
  // Level order with name tie-breaks: net ids depend on statement order, so
  // sorting ties by name keeps serialization a fixpoint under reparsing.
  std::vector<NetId> order;
  for (NetId id : c.level_order()) {
    if (c.net(id).driver != kNoGate) order.push_back(id);
  }
  std::stable_sort(order.begin(), order.end(), [&](NetId a, NetId b) {
    if (c.net(a).level != c.net(b).level) return c.net(a).level < c.net(b).level;
    return c.net(a).name < c.net(b).name;
  });
  for (NetId id : order) {
    const Net& n = c.net(id);
    const Gate& g = c.gate(n.driver);
    out << n.name << " = " << to_string(g.type) << "(";
    for (size_t i = 0; i < g.inputs.size(); ++i) {
      if (i) out << ", ";
      out << c.net(g.inputs[i]).name;
    }
    out << ")\n";
  }
  return out.str();
}

Circuit load_bench_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CircuitError("cannot open netlist file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bench(ss.str());
}

}  // namespace atpg
