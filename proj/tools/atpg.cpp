// Command-line front end for the ATPG toolkit.
//
// Subcommands: stats | testability | rank-faults | gen-data | train | atpg |
// compare.  Every command writes a run manifest (JSON) next to its outputs;
// CSV outputs contain no timestamps or elapsed times, so identical reruns are
// byte-identical.
//
// Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 internal
// invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "atpg/bench.hpp"
#include "atpg/cross_validate.hpp"
#include "atpg/datagen.hpp"
#include "atpg/faults.hpp"
#include "atpg/heuristics.hpp"
#include "atpg/model_io.hpp"
#include "atpg/podem.hpp"
#include "atpg/rng.hpp"
#include "atpg/testability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace atpg;

namespace {

constexpr const char* kToolVersion = "atpg 1.0.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::ostringstream hex;
  hex << std::hex << fnv1a(ss.str());
  return hex.str();
}

// Shared plumbing for every command: collects inputs/outputs/flags and writes
// the manifest next to the first output (or into out_dir).
struct Manifest {
  std::string command;
  std::string out_dir;
  uint64_t seed = 0;
  json flags = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started = iso_now();

  void write() const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["flags"] = flags;
    j["tool_version"] = kToolVersion;
    j["started"] = started;
    j["finished"] = iso_now();
    json digests = json::object();
    for (const std::string& o : outputs) digests[o] = file_digest(o);
    j["output_digests"] = digests;
    fs::path path = fs::path(out_dir) / (command + ".manifest.json");
    std::ofstream out(path);
    out << j.dump(2) << "\n";
  }
};

Circuit load_netlist(const std::string& path) {
  try {
    return load_bench_file(path);
  } catch (const BenchParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

fs::path out_path(const Manifest& m, const std::string& name) {
  fs::create_directories(m.out_dir);
  return fs::path(m.out_dir) / name;
}

// Fault spec grammar: hard:K | random:K:SEED | all | file:PATH.
std::vector<Fault> resolve_faults(const Circuit& c, const Testability& t,
                                  const std::string& spec) {
  std::vector<Fault> all = enumerate_faults(c);
  for (Fault& f : all) {
    f.p_detect = detection_probability(f, t[f.net].cc, t[f.net].co);
  }
  if (spec == "all") return all;
  if (spec.rfind("hard:", 0) == 0) {
    size_t k = std::stoul(spec.substr(5));
    return rank_hard_faults(all, k);
  }
  if (spec.rfind("random:", 0) == 0) {
    std::string rest = spec.substr(7);
    size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      throw UsageError("fault spec 'random' needs random:K:SEED");
    }
    size_t k = std::stoul(rest.substr(0, colon));
    uint64_t seed = std::stoull(rest.substr(colon + 1));
    return sample_random_faults(all, k, seed);
  }
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw std::runtime_error("cannot open fault file " + spec.substr(5));
    std::vector<Fault> picked;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      size_t comma = line.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error("fault file line " + std::to_string(lineno) +
                                 ": expected NET,STUCK_AT");
      }
      std::string name = line.substr(0, comma);
      int sa = std::stoi(line.substr(comma + 1));
      NetId id = c.find_net(name);
      if (id == kNoNet) {
        throw std::runtime_error("fault file line " + std::to_string(lineno) +
                                 ": unknown net " + name);
      }
      if (sa != 0 && sa != 1) {
        throw std::runtime_error("fault file line " + std::to_string(lineno) +
                                 ": stuck_at must be 0 or 1");
      }
      Fault f{id, sa};
      f.p_detect = detection_probability(f, t[id].cc, t[id].co);
      picked.push_back(f);
    }
    return picked;
  }
  throw UsageError("bad fault spec '" + spec +
                   "' (expected hard:K | random:K:SEED | all | file:PATH)");
}

// Heuristic spec grammar: cop | model:PATH | meta:PATH.
std::unique_ptr<BacktraceHeuristic> resolve_heuristic(
    const Circuit& c, const Testability& t,
    const std::vector<FeatureVector>& feats, const std::string& spec) {
  if (spec == "cop") {
    std::vector<double> cc(c.num_nets());
    for (NetId id = 0; id < c.num_nets(); ++id) cc[id] = t[id].cc;
    return std::make_unique<CopHeuristic>(std::move(cc));
  }
  if (spec.rfind("model:", 0) == 0) {
    std::string path = spec.substr(6);
    std::string kind = detect_model_kind(path);
    if (kind == "hybnn") {
      return std::make_unique<NetScoreHeuristic>(
          make_hybnn_heuristic(load_hybnn_file(path), feats));
    }
    if (kind == "svr") {
      return std::make_unique<NetScoreHeuristic>(
          make_svr_heuristic(load_svr_file(path), feats));
    }
    throw std::runtime_error("model file " + path + " has kind '" + kind +
                             "'; expected hybnn or svr");
  }
  if (spec.rfind("meta:", 0) == 0) {
    HybMTBundle b = load_bundle(spec.substr(5));
    return std::make_unique<NetScoreHeuristic>(
        hybmt_heuristic(b.meta, b.hybnn, b.svr, feats));
  }
  throw UsageError("bad heuristic spec '" + spec +
                   "' (expected cop | model:PATH | meta:PATH)");
}

std::string vector_string(const InputVector& v) {
  std::string s;
  for (LogicValue x : v) {
    s += x == LogicValue::ONE ? '1' : x == LogicValue::ZERO ? '0' : 'X';
  }
  return s;
}

void write_precise(std::ostream& out, double v) {
  out.precision(17);
  out << v;
}

// ---- gen-data CSV schema (also consumed by train) -------------------------
// circuit,net,cc,co,dist_norm,g0..g13,cc0,cc1,scoap_co,fanout,
// f_total,f_success,p

void write_training_header(std::ostream& out) {
  out << "circuit,net,cc,co,dist_norm";
  for (int g = 0; g < kGateTypeCount; ++g) out << ",g" << g;
  out << ",cc0,cc1,scoap_co,fanout,f_total,f_success,p\n";
}

struct DataRow {
  std::string circuit;
  std::string net;
  std::array<double, kExtendedFeatureCount> features{};
  long f_total = 0;
  long f_success = 0;
  double p = 0.0;
};

std::vector<DataRow> read_training_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<DataRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 2 + kExtendedFeatureCount + 3) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) +
                               ": expected " +
                               std::to_string(2 + kExtendedFeatureCount + 3) +
                               " columns");
    }
    DataRow r;
    r.circuit = cells[0];
    r.net = cells[1];
    for (int i = 0; i < kExtendedFeatureCount; ++i) {
      r.features[i] = std::stod(cells[2 + i]);
    }
    r.f_total = std::stol(cells[2 + kExtendedFeatureCount]);
    r.f_success = std::stol(cells[2 + kExtendedFeatureCount + 1]);
    r.p = std::stod(cells[2 + kExtendedFeatureCount + 2]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// Meta training data: f0..f20,label (21 extended features, 0/1 class).
std::pair<std::vector<std::vector<double>>, std::vector<int>> read_meta_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != kExtendedFeatureCount + 1) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) +
                               ": expected " +
                               std::to_string(kExtendedFeatureCount + 1) +
                               " columns");
    }
    std::vector<double> row(kExtendedFeatureCount);
    for (int i = 0; i < kExtendedFeatureCount; ++i) row[i] = std::stod(cells[i]);
    X.push_back(std::move(row));
    y.push_back(std::stoi(cells.back()));
  }
  return {std::move(X), std::move(y)};
}

// ---- commands -------------------------------------------------------------

int cmd_stats(const std::string& netlist, Manifest& m) {
  Circuit c = load_netlist(netlist);
  int pis = 0, ppis = 0, pos = 0, ppos = 0;
  for (NetId id : c.inputs()) (c.net(id).is_ppi ? ppis : pis)++;
  for (NetId id : c.outputs()) (c.net(id).is_ppo ? ppos : pos)++;
  std::cout << "netlist: " << netlist << "\n"
            << "nets: " << c.num_nets() << "\n"
            << "gates: " << c.num_gates() << "\n"
            << "inputs: " << pis << "\n"
            << "outputs: " << pos << "\n"
            << "flip-flops: " << c.dff_pairs().size() << "\n"
            << "pseudo-inputs: " << ppis << "\n"
            << "pseudo-outputs: " << ppos << "\n"
            << "levels: " << c.max_level() << "\n";
  if (c.has_bad_gates()) {
    std::cout << "unknown-gates: " << c.bad_gate_count() << "\n";
  }
  m.write();
  return 0;
}

int cmd_testability(const std::string& netlist, const std::string& out_name,
                    Manifest& m) {
  Circuit c = load_netlist(netlist);
  Testability t = analyze_testability(c);
  fs::path path = out_path(m, out_name);
  std::ofstream out(path);
  write_feature_csv(out, c, t);
  out.close();
  m.outputs.push_back(path.string());
  m.write();
  std::cout << "wrote " << path.string() << " (" << c.num_nets() << " rows)\n";
  return 0;
}

int cmd_rank_faults(const std::string& netlist, const std::string& spec,
                    const std::string& out_name, Manifest& m) {
  Circuit c = load_netlist(netlist);
  Testability t = analyze_testability(c);
  std::vector<Fault> faults = resolve_faults(c, t, spec);
  fs::path path = out_path(m, out_name);
  std::ofstream out(path);
  out << "net,stuck_at,p_detect\n";
  for (const Fault& f : faults) {
    out << c.net(f.net).name << "," << f.stuck_at << ",";
    write_precise(out, f.p_detect);
    out << "\n";
  }
  out.close();
  m.outputs.push_back(path.string());
  m.write();
  std::cout << "wrote " << path.string() << " (" << faults.size() << " faults)\n";
  return 0;
}

int cmd_gen_data(const std::vector<std::string>& netlists, int k_hard,
                 long backtrack_limit, const std::string& out_name, Manifest& m) {
  fs::path path = out_path(m, out_name);
  std::ofstream out(path);
  write_training_header(out);
  long rows = 0;
  for (const std::string& nl : netlists) {
    Circuit c = load_netlist(nl);
    Testability t = analyze_testability(c);
    auto feats = build_features(c, t);
    NetLabelAccumulator acc = generate_labels(c, t, k_hard, backtrack_limit);
    std::string name = fs::path(nl).stem().string();
    for (NetId id = 0; id < c.num_nets(); ++id) {
      if (!acc.has_data(id)) continue;
      out << name << "," << c.net(id).name;
      for (double v : feats[id].extended) {
        out << ",";
        write_precise(out, v);
      }
      out << "," << acc.f_total[id] << "," << acc.f_success[id] << ",";
      write_precise(out, acc.p(id));
      out << "\n";
      ++rows;
    }
  }
  out.close();
  m.outputs.push_back(path.string());
  m.write();
  std::cout << "wrote " << path.string() << " (" << rows << " rows)\n";
  return 0;
}

struct TrainFlags {
  std::string kind;
  int h1 = 32, h2 = 16, epochs = 200, batch = 256, patience = 20;
  double lr = 0.01;
  double C = 1.0, epsilon = 0.1, gamma = 0.0;
  std::string kernel = "rbf";
  int n_trees = 100;
  int cv = 0;  // > 0: k-fold grid search before the final fit
  std::string hybnn_path, svr_path, meta_path;  // kind == bundle
};

int cmd_train(const std::string& data, const TrainFlags& f,
              const std::string& out_name, Manifest& m) {
  fs::path path = out_path(m, out_name);

  if (f.kind == "bundle") {
    if (f.hybnn_path.empty() || f.svr_path.empty() || f.meta_path.empty()) {
      throw UsageError("--kind bundle needs --hybnn, --svr, and --meta");
    }
    HybMTBundle b;
    b.hybnn = load_hybnn_file(f.hybnn_path);
    b.svr = load_svr_file(f.svr_path);
    b.meta = load_forest_file(f.meta_path);
    save_bundle(path.string(), b);
    m.outputs.push_back(path.string());
    m.write();
    std::cout << "wrote " << path.string() << "\n";
    return 0;
  }

  auto write_cv_report = [&](const CvResult& cv, size_t n_configs,
                             const std::vector<std::string>& names) {
    fs::path rpath = out_path(m, out_name + ".cv.csv");
    std::ofstream r(rpath);
    r << "config,fold,score\n";
    for (size_t cfg = 0; cfg < n_configs; ++cfg) {
      for (size_t fold = 0; fold < cv.fold_scores[cfg].size(); ++fold) {
        r << names[cfg] << "," << fold << ",";
        write_precise(r, cv.fold_scores[cfg][fold]);
        r << "\n";
      }
    }
    r.close();
    m.outputs.push_back(rpath.string());
    std::cout << "wrote " << rpath.string() << " (best: " << names[cv.best_config]
              << ")\n";
  };

  if (f.kind == "meta") {
    auto [X, y] = read_meta_csv(data);
    ForestTrainOptions opts;
    opts.n_trees = f.n_trees;
    opts.seed = m.seed;
    if (f.cv > 0) {
      std::vector<int> grid = {25, 50, 100, 200};
      std::vector<std::string> names;
      for (int g : grid) names.push_back("n_trees=" + std::to_string(g));
      auto folds = make_folds(X.size(), f.cv, m.seed);
      CvResult cv = cross_validate(
          grid.size(), folds, f.cv, /*maximize=*/true,
          [&](size_t cfg, const std::vector<size_t>& tr,
              const std::vector<size_t>& te) {
            std::vector<std::vector<double>> Xt;
            std::vector<int> yt;
            for (size_t i : tr) {
              Xt.push_back(X[i]);
              yt.push_back(y[i]);
            }
            ForestTrainOptions o = opts;
            o.n_trees = grid[cfg];
            RandomForestMeta model = meta_train(Xt, yt, o);
            int correct = 0;
            for (size_t i : te) correct += meta_predict(model, X[i]) == y[i];
            return static_cast<double>(correct) / te.size();
          });
      write_cv_report(cv, grid.size(), names);
      opts.n_trees = grid[cv.best_config];
    }
    RandomForestMeta model = meta_train(X, y, opts);
    save_forest_file(path.string(), model);
    if (model.single_class_warning) {
      std::cerr << "warning: training labels contain a single class\n";
    }
    // Feature importance alongside the model.
    fs::path ipath = out_path(m, out_name + ".importance.csv");
    std::ofstream imp(ipath);
    imp << "feature,importance\n";
    auto fi = feature_importance(model);
    for (size_t i = 0; i < fi.size(); ++i) {
      imp << i << ",";
      write_precise(imp, fi[i]);
      imp << "\n";
    }
    imp.close();
    m.outputs.push_back(path.string());
    m.outputs.push_back(ipath.string());
    m.write();
    std::cout << "wrote " << path.string() << "\n";
    return 0;
  }

  std::vector<DataRow> rows = read_training_csv(data);
  if (rows.empty()) throw std::runtime_error(data + ": no training rows");
  std::vector<double> Xflat;
  std::vector<std::vector<double>> Xvec;
  std::vector<double> y;
  for (const DataRow& r : rows) {
    for (int i = 0; i < kBaseFeatureCount; ++i) Xflat.push_back(r.features[i]);
    Xvec.emplace_back(r.features.begin(), r.features.begin() + kBaseFeatureCount);
    y.push_back(r.p);
  }

  if (f.kind == "hybnn") {
    HybNNTrainOptions opts;
    opts.epochs = f.epochs;
    opts.batch = f.batch;
    opts.lr = f.lr;
    opts.patience = f.patience;
    opts.seed = m.seed;
    int h1 = f.h1, h2 = f.h2;
    if (f.cv > 0) {
      struct Cfg { int h1, h2; };
      std::vector<Cfg> grid = {{16, 8}, {32, 16}, {64, 16}};
      std::vector<std::string> names;
      for (const Cfg& g : grid) {
        names.push_back("h1=" + std::to_string(g.h1) + ";h2=" + std::to_string(g.h2));
      }
      auto folds = make_folds(rows.size(), f.cv, m.seed);
      CvResult cv = cross_validate(
          grid.size(), folds, f.cv, /*maximize=*/false,
          [&](size_t cfg, const std::vector<size_t>& tr,
              const std::vector<size_t>& te) {
            std::vector<double> Xt, yt, Xe, ye;
            for (size_t i : tr) {
              Xt.insert(Xt.end(), Xvec[i].begin(), Xvec[i].end());
              yt.push_back(y[i]);
            }
            for (size_t i : te) {
              Xe.insert(Xe.end(), Xvec[i].begin(), Xvec[i].end());
              ye.push_back(y[i]);
            }
            HybNNModel model = hybnn_init(grid[cfg].h1, grid[cfg].h2, m.seed);
            hybnn_train(model, Xt, yt, opts);
            return hybnn_mse(model, Xe, ye);
          });
      write_cv_report(cv, grid.size(), names);
      h1 = grid[cv.best_config].h1;
      h2 = grid[cv.best_config].h2;
    }
    HybNNModel model = hybnn_init(h1, h2, m.seed);
    HybNNTrainLog log = hybnn_train(model, Xflat, y, opts);
    save_hybnn_file(path.string(), model);
    m.outputs.push_back(path.string());
    m.write();
    std::cout << "wrote " << path.string() << " (train mse ";
    write_precise(std::cout, log.final_train_mse);
    std::cout << ", " << log.epochs_run << " epochs)\n";
    return 0;
  }

  if (f.kind == "svr") {
    SvrTrainOptions opts;
    opts.C = f.C;
    opts.epsilon = f.epsilon;
    opts.gamma = f.gamma;
    opts.kernel = f.kernel == "linear" ? SvrKernel::LINEAR : SvrKernel::RBF;
    if (f.kernel != "linear" && f.kernel != "rbf") {
      throw UsageError("--kernel must be rbf or linear");
    }
    if (f.cv > 0) {
      struct Cfg { double C, epsilon; };
      std::vector<Cfg> grid = {{1, 0.1}, {10, 0.1}, {10, 0.05}, {100, 0.05}};
      std::vector<std::string> names;
      for (const Cfg& g : grid) {
        names.push_back("C=" + std::to_string(g.C) +
                        ";epsilon=" + std::to_string(g.epsilon));
      }
      auto folds = make_folds(rows.size(), f.cv, m.seed);
      CvResult cv = cross_validate(
          grid.size(), folds, f.cv, /*maximize=*/false,
          [&](size_t cfg, const std::vector<size_t>& tr,
              const std::vector<size_t>& te) {
            std::vector<std::vector<double>> Xt;
            std::vector<double> yt;
            for (size_t i : tr) {
              Xt.push_back(Xvec[i]);
              yt.push_back(y[i]);
            }
            SvrTrainOptions o = opts;
            o.C = grid[cfg].C;
            o.epsilon = grid[cfg].epsilon;
            SvrModel model = svr_train(Xt, yt, o);
            double mse = 0.0;
            for (size_t i : te) {
              double d = svr_predict(model, Xvec[i]) - y[i];
              mse += d * d;
            }
            return mse / te.size();
          });
      write_cv_report(cv, grid.size(), names);
      opts.C = grid[cv.best_config].C;
      opts.epsilon = grid[cv.best_config].epsilon;
    }
    SvrModel model = svr_train(Xvec, y, opts);
    save_svr_file(path.string(), model);
    m.outputs.push_back(path.string());
    m.write();
    std::cout << "wrote " << path.string() << " (" << model.support_vectors.size()
              << " support vectors)\n";
    return 0;
  }

  throw UsageError("--kind must be hybnn, svr, meta, or bundle");
}

int cmd_atpg(const std::string& netlist, const std::string& fault_spec,
             const std::string& heuristic_spec, long backtrack_limit, int jobs,
             const std::string& out_name, Manifest& m) {
  Circuit c = load_netlist(netlist);
  Testability t = analyze_testability(c);
  auto feats = build_features(c, t);
  std::vector<Fault> faults = resolve_faults(c, t, fault_spec);
  auto heuristic = resolve_heuristic(c, t, feats, heuristic_spec);
  CampaignReport rep = run_campaign(c, faults, *heuristic, backtrack_limit, jobs);

  fs::path path = out_path(m, out_name);
  std::ofstream out(path);
  out << "net,stuck_at,outcome,backtraces,backtracks,decisions,vector\n";
  for (const AtpgResult& r : rep.results) {
    out << c.net(r.fault.net).name << "," << r.fault.stuck_at << ","
        << to_string(r.outcome) << "," << r.backtraces << "," << r.backtracks
        << "," << r.decisions << "," << vector_string(r.vector) << "\n";
  }
  out.close();
  m.outputs.push_back(path.string());
  m.write();

  std::cout << "faults: " << rep.results.size() << "\n"
            << "detected: " << rep.detected << "\n"
            << "untestable: " << rep.untestable << "\n"
            << "aborted: " << rep.aborted << "\n"
            << "coverage_percent: " << rep.coverage_percent << "\n"
            << "backtraces: " << rep.total_backtraces << "\n"
            << "backtracks: " << rep.total_backtracks << "\n"
            << "work: " << rep.work() << "\n"
            << "elapsed_us: " << rep.elapsed.count() << "\n";
  return 0;
}

struct ReportSummary {
  long faults = 0, detected = 0, untestable = 0, aborted = 0;
  long backtraces = 0, backtracks = 0;
  std::vector<std::string> keys;  // "net/sa" in order

  long work() const { return backtraces + backtracks; }
  double coverage() const {
    return faults == 0 ? 100.0 : 100.0 * detected / static_cast<double>(faults);
  }
};

ReportSummary read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("net,stuck_at,outcome", 0) != 0) {
    throw std::runtime_error(path + ": not an atpg report CSV");
  }
  ReportSummary s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 6) throw std::runtime_error(path + ": short row");
    ++s.faults;
    s.keys.push_back(cells[0] + "/" + cells[1]);
    if (cells[2] == "DETECTED") ++s.detected;
    else if (cells[2] == "UNTESTABLE") ++s.untestable;
    else ++s.aborted;
    s.backtraces += std::stol(cells[3]);
    s.backtracks += std::stol(cells[4]);
  }
  return s;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_name, Manifest& m) {
  ReportSummary a = read_report(a_path);
  ReportSummary b = read_report(b_path);

  // Flag fault rows present in one report but not the other.
  std::set<std::string> ka(a.keys.begin(), a.keys.end());
  std::set<std::string> kb(b.keys.begin(), b.keys.end());
  std::vector<std::string> only_a, only_b;
  for (const auto& k : ka) if (!kb.count(k)) only_a.push_back(k);
  for (const auto& k : kb) if (!ka.count(k)) only_b.push_back(k);

  double ratio = b.work() == 0
                     ? (a.work() == 0 ? 1.0
                                      : std::numeric_limits<double>::infinity())
                     : static_cast<double>(a.work()) / b.work();

  fs::path path = out_path(m, out_name);
  std::ofstream out(path);
  out << "metric,a,b\n";
  out << "faults," << a.faults << "," << b.faults << "\n";
  out << "coverage_percent,";
  write_precise(out, a.coverage());
  out << ",";
  write_precise(out, b.coverage());
  out << "\n";
  out << "backtraces," << a.backtraces << "," << b.backtraces << "\n";
  out << "backtracks," << a.backtracks << "," << b.backtracks << "\n";
  out << "work," << a.work() << "," << b.work() << "\n";
  out << "work_ratio_a_over_b,";
  write_precise(out, ratio);
  out << ",\n";
  out << "missing_in_b," << only_a.size() << ",\n";
  out << "missing_in_a,," << only_b.size() << "\n";
  out.close();
  m.outputs.push_back(path.string());
  m.write();

  std::cout << "metric            A               B\n"
            << "coverage_percent  " << a.coverage() << "  " << b.coverage() << "\n"
            << "backtraces        " << a.backtraces << "  " << b.backtraces << "\n"
            << "backtracks        " << a.backtracks << "  " << b.backtracks << "\n"
            << "work              " << a.work() << "  " << b.work() << "\n"
            << "work_ratio (A/B)  " << ratio << "\n";
  for (const auto& k : only_a) std::cout << "missing in B: " << k << "\n";
  for (const auto& k : only_b) std::cout << "missing in A: " << k << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATPG toolkit: testability analysis, PODEM test generation, and "
               "learned backtrace heuristics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "Master RNG seed")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads for fault campaigns")
      ->capture_default_str();
  app.add_option("--out-dir", out_dir, "Directory for output files")
      ->capture_default_str();

  std::string netlist, out_name, fault_spec = "hard:100", heuristic_spec = "cop";
  long backtrack_limit = kDefaultBacktrackLimit;

  auto* stats = app.add_subcommand("stats", "Summarize a netlist");
  stats->add_option("netlist", netlist, "BENCH netlist")->required();

  std::string test_out = "testability.csv";
  auto* testab = app.add_subcommand("testability", "Per-net feature dump");
  testab->add_option("netlist", netlist)->required();
  testab->add_option("--out", test_out, "Output CSV name")->capture_default_str();

  std::string rank_out = "faults.csv";
  auto* rank = app.add_subcommand("rank-faults", "Rank faults by difficulty");
  rank->add_option("netlist", netlist)->required();
  rank->add_option("--faults", fault_spec,
                   "hard:K | random:K:SEED | all | file:PATH")
      ->capture_default_str();
  rank->add_option("--out", rank_out)->capture_default_str();

  std::vector<std::string> netlists;
  int k_hard = 100;
  std::string data_out = "training.csv";
  auto* gen = app.add_subcommand("gen-data", "Generate labeled training data");
  gen->add_option("netlists", netlists, "BENCH netlists")->required();
  gen->add_option("--k-hard", k_hard, "Hardest faults per circuit")
      ->capture_default_str();
  gen->add_option("--backtrack-limit", backtrack_limit)->capture_default_str();
  gen->add_option("--out", data_out)->capture_default_str();

  TrainFlags tf;
  std::string train_data, model_out = "model.model";
  auto* train = app.add_subcommand("train", "Train a predictor");
  train->add_option("--data", train_data, "Training CSV (gen-data output)");
  train->add_option("--kind", tf.kind, "hybnn | svr | meta | bundle")->required();
  train->add_option("--out", model_out)->capture_default_str();
  train->add_option("--h1", tf.h1)->capture_default_str();
  train->add_option("--h2", tf.h2)->capture_default_str();
  train->add_option("--epochs", tf.epochs)->capture_default_str();
  train->add_option("--batch", tf.batch)->capture_default_str();
  train->add_option("--lr", tf.lr)->capture_default_str();
  train->add_option("--patience", tf.patience)->capture_default_str();
  train->add_option("--C", tf.C)->capture_default_str();
  train->add_option("--epsilon", tf.epsilon)->capture_default_str();
  train->add_option("--gamma", tf.gamma, "RBF gamma; <= 0 selects 1/(dim*var)")
      ->capture_default_str();
  train->add_option("--kernel", tf.kernel, "rbf | linear")->capture_default_str();
  train->add_option("--n-trees", tf.n_trees)->capture_default_str();
  train->add_option("--cv", tf.cv, "k-fold grid search before the final fit")
      ->capture_default_str();
  train->add_option("--hybnn", tf.hybnn_path, "HybNN model (kind bundle)");
  train->add_option("--svr", tf.svr_path, "SVR model (kind bundle)");
  train->add_option("--meta", tf.meta_path, "Forest model (kind bundle)");

  std::string atpg_out = "report.csv";
  auto* atpg_cmd = app.add_subcommand("atpg", "Run a PODEM campaign");
  atpg_cmd->add_option("netlist", netlist)->required();
  atpg_cmd->add_option("--faults", fault_spec,
                       "hard:K | random:K:SEED | all | file:PATH")
      ->capture_default_str();
  atpg_cmd->add_option("--heuristic", heuristic_spec,
                       "cop | model:PATH | meta:PATH")
      ->capture_default_str();
  atpg_cmd->add_option("--backtrack-limit", backtrack_limit)
      ->capture_default_str();
  atpg_cmd->add_option("--out", atpg_out)->capture_default_str();

  std::string cmp_a, cmp_b, cmp_out = "compare.csv";
  auto* cmp = app.add_subcommand("compare", "Compare two campaign reports");
  cmp->add_option("a", cmp_a, "Report A")->required();
  cmp->add_option("b", cmp_b, "Report B")->required();
  cmp->add_option("--out", cmp_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Manifest manifest;
  manifest.out_dir = out_dir;
  manifest.seed = seed;
  manifest.flags["jobs"] = jobs;

  try {
    if (app.got_subcommand(stats)) {
      manifest.command = "stats";
      manifest.inputs = {netlist};
      return cmd_stats(netlist, manifest);
    }
    if (app.got_subcommand(testab)) {
      manifest.command = "testability";
      manifest.inputs = {netlist};
      return cmd_testability(netlist, test_out, manifest);
    }
    if (app.got_subcommand(rank)) {
      manifest.command = "rank-faults";
      manifest.inputs = {netlist};
      manifest.flags["faults"] = fault_spec;
      return cmd_rank_faults(netlist, fault_spec, rank_out, manifest);
    }
    if (app.got_subcommand(gen)) {
      manifest.command = "gen-data";
      manifest.inputs = netlists;
      manifest.flags["k_hard"] = k_hard;
      manifest.flags["backtrack_limit"] = backtrack_limit;
      return cmd_gen_data(netlists, k_hard, backtrack_limit, data_out, manifest);
    }
    if (app.got_subcommand(train)) {
      manifest.command = "train";
      if (!train_data.empty()) manifest.inputs = {train_data};
      manifest.flags["kind"] = tf.kind;
      manifest.flags["cv"] = tf.cv;
      if (tf.kind != "bundle" && train_data.empty()) {
        throw UsageError("train needs --data unless --kind bundle");
      }
      return cmd_train(train_data, tf, model_out, manifest);
    }
    if (app.got_subcommand(atpg_cmd)) {
      manifest.command = "atpg";
      manifest.inputs = {netlist};
      manifest.flags["faults"] = fault_spec;
      manifest.flags["heuristic"] = heuristic_spec;
      manifest.flags["backtrack_limit"] = backtrack_limit;
      return cmd_atpg(netlist, fault_spec, heuristic_spec, backtrack_limit, jobs,
                      atpg_out, manifest);
    }
    if (app.got_subcommand(cmp)) {
      manifest.command = "compare";
      manifest.inputs = {cmp_a, cmp_b};
      return cmd_compare(cmp_a, cmp_b, cmp_out, manifest);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CircuitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    if (msg.rfind("internal:", 0) == 0) {
      std::cerr << "error: " << msg << "\n";
      return 3;
    }
    std::cerr << "error: " << msg << "\n";
    return 2;
  }
}
