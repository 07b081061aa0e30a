#include "atpg/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace atpg {
namespace {

constexpr const char* kMagic = "ATPG-MODEL 1";
constexpr const char* kBundleMagic = "ATPG-BUNDLE 1";

void expect_line(std::istream& in, const std::string& want) {
  std::string line;
  std::getline(in, line);
  if (line != want) {
    throw std::runtime_error("model file: expected '" + want + "', got '" + line + "'");
  }
}

std::string expect_key(std::istream& in, const std::string& key) {
  std::string k;
  in >> k;
  if (k != key) {
    throw std::runtime_error("model file: expected key '" + key + "', got '" + k + "'");
  }
  std::string value;
  in >> value;
  return value;
}

void set_precision(std::ostream& out) { out.precision(17); }

template <typename Fn>
void save_file(const std::string& path, Fn fn) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  fn(out);
}

template <typename T, typename Fn>
T load_file(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return fn(in);
}

}  // namespace

void save_hybnn(std::ostream& out, const HybNNModel& m) {
  set_precision(out);
  out << kMagic << "\nkind hybnn\n";
  out << "h1 " << m.h1 << "\nh2 " << m.h2 << "\n";
  out << "params " << m.params.size() << "\n";
  for (double v : m.params) out << v << "\n";
}

HybNNModel load_hybnn(std::istream& in) {
  expect_line(in, kMagic);
  expect_line(in, "kind hybnn");
  HybNNModel m;
  m.h1 = std::stoi(expect_key(in, "h1"));
  m.h2 = std::stoi(expect_key(in, "h2"));
  size_t count = std::stoul(expect_key(in, "params"));
  if (static_cast<int>(count) != m.num_params()) {
    throw std::runtime_error("hybnn model file: parameter count mismatch");
  }
  m.params.resize(count);
  for (double& v : m.params) in >> v;
  if (!in) throw std::runtime_error("hybnn model file: truncated parameters");
  return m;
}

void save_svr(std::ostream& out, const SvrModel& m) {
  set_precision(out);
  out << kMagic << "\nkind svr\n";
  out << "dim " << m.dim << "\n";
  out << "kernel " << (m.kernel == SvrKernel::RBF ? "rbf" : "linear") << "\n";
  out << "gamma " << m.gamma << "\nC " << m.C << "\nepsilon " << m.epsilon
      << "\nbias " << m.bias << "\nkkt_gap " << m.kkt_gap << "\n";
  out << "nsv " << m.dual.size() << "\n";
  for (size_t i = 0; i < m.dual.size(); ++i) {
    out << m.dual[i];
    for (double v : m.support_vectors[i]) out << " " << v;
    out << "\n";
  }
}

SvrModel load_svr(std::istream& in) {
  expect_line(in, kMagic);
  expect_line(in, "kind svr");
  SvrModel m;
  m.dim = std::stoi(expect_key(in, "dim"));
  std::string kernel = expect_key(in, "kernel");
  if (kernel == "rbf") m.kernel = SvrKernel::RBF;
  else if (kernel == "linear") m.kernel = SvrKernel::LINEAR;
  else throw std::runtime_error("svr model file: unknown kernel " + kernel);
  m.gamma = std::stod(expect_key(in, "gamma"));
  m.C = std::stod(expect_key(in, "C"));
  m.epsilon = std::stod(expect_key(in, "epsilon"));
  m.bias = std::stod(expect_key(in, "bias"));
  m.kkt_gap = std::stod(expect_key(in, "kkt_gap"));
  size_t nsv = std::stoul(expect_key(in, "nsv"));
  m.dual.resize(nsv);
  m.support_vectors.assign(nsv, std::vector<double>(m.dim));
  for (size_t i = 0; i < nsv; ++i) {
    in >> m.dual[i];
    for (int f = 0; f < m.dim; ++f) in >> m.support_vectors[i][f];
  }
  if (!in) throw std::runtime_error("svr model file: truncated support vectors");
  return m;
}

void save_forest(std::ostream& out, const RandomForestMeta& m) {
  set_precision(out);
  out << kMagic << "\nkind forest\n";
  out << "n_features " << m.n_features << "\n";
  out << "single_class " << (m.single_class_warning ? 1 : 0) << "\n";
  out << "n_trees " << m.trees.size() << "\n";
  for (size_t t = 0; t < m.trees.size(); ++t) {
    out << "tree " << m.tree_seeds[t] << " " << m.trees[t].nodes.size() << "\n";
    for (const TreeNode& n : m.trees[t].nodes) {
      out << n.feature << " " << n.threshold << " " << n.left << " " << n.right
          << " " << n.n_samples << " " << n.class_counts[0] << " "
          << n.class_counts[1] << "\n";
    }
  }
}

RandomForestMeta load_forest(std::istream& in) {
  expect_line(in, kMagic);
  expect_line(in, "kind forest");
  RandomForestMeta m;
  m.n_features = std::stoi(expect_key(in, "n_features"));
  m.single_class_warning = expect_key(in, "single_class") == "1";
  size_t n_trees = std::stoul(expect_key(in, "n_trees"));
  for (size_t t = 0; t < n_trees; ++t) {
    std::string kw;
    uint64_t seed;
    size_t n_nodes;
    in >> kw >> seed >> n_nodes;
    if (kw != "tree") throw std::runtime_error("forest model file: bad tree header");
    m.tree_seeds.push_back(seed);
    DecisionTree tree;
    tree.nodes.resize(n_nodes);
    for (TreeNode& n : tree.nodes) {
      in >> n.feature >> n.threshold >> n.left >> n.right >> n.n_samples >>
          n.class_counts[0] >> n.class_counts[1];
    }
    m.trees.push_back(std::move(tree));
  }
  if (!in) throw std::runtime_error("forest model file: truncated");
  return m;
}

void save_hybnn_file(const std::string& path, const HybNNModel& m) {
  save_file(path, [&](std::ostream& out) { save_hybnn(out, m); });
}
HybNNModel load_hybnn_file(const std::string& path) {
  return load_file<HybNNModel>(path, [](std::istream& in) { return load_hybnn(in); });
}
void save_svr_file(const std::string& path, const SvrModel& m) {
  save_file(path, [&](std::ostream& out) { save_svr(out, m); });
}
SvrModel load_svr_file(const std::string& path) {
  return load_file<SvrModel>(path, [](std::istream& in) { return load_svr(in); });
}
void save_forest_file(const std::string& path, const RandomForestMeta& m) {
  save_file(path, [&](std::ostream& out) { save_forest(out, m); });
}
RandomForestMeta load_forest_file(const std::string& path) {
  return load_file<RandomForestMeta>(path,
                                     [](std::istream& in) { return load_forest(in); });
}

void save_bundle(const std::string& bundle_path, const HybMTBundle& bundle) {
  namespace fs = std::filesystem;
  fs::path base = fs::path(bundle_path).parent_path();
  fs::path stem = fs::path(bundle_path).stem();
  std::string meta_rel = stem.string() + ".meta.model";
  std::string hybnn_rel = stem.string() + ".hybnn.model";
  std::string svr_rel = stem.string() + ".svr.model";
  save_forest_file((base / meta_rel).string(), bundle.meta);
  save_hybnn_file((base / hybnn_rel).string(), bundle.hybnn);
  save_svr_file((base / svr_rel).string(), bundle.svr);
  std::ofstream out(bundle_path);
  if (!out) throw std::runtime_error("cannot write bundle file: " + bundle_path);
  out << kBundleMagic << "\n";
  out << "meta " << meta_rel << "\n";
  out << "hybnn " << hybnn_rel << "\n";
  out << "svr " << svr_rel << "\n";
}

HybMTBundle load_bundle(const std::string& bundle_path) {
  namespace fs = std::filesystem;
  std::ifstream in(bundle_path);
  if (!in) throw std::runtime_error("cannot open bundle file: " + bundle_path);
  expect_line(in, kBundleMagic);
  fs::path base = fs::path(bundle_path).parent_path();
  HybMTBundle bundle;
  bundle.meta = load_forest_file((base / expect_key(in, "meta")).string());
  bundle.hybnn = load_hybnn_file((base / expect_key(in, "hybnn")).string());
  bundle.svr = load_svr_file((base / expect_key(in, "svr")).string());
  return bundle;
}

std::string detect_model_kind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string line;
  std::getline(in, line);
  if (line == kBundleMagic) return "bundle";
  if (line != kMagic) throw std::runtime_error("not a model file: " + path);
  std::getline(in, line);
  if (line.rfind("kind ", 0) != 0) {
    throw std::runtime_error("model file missing kind: " + path);
  }
  return line.substr(5);
}

}  // namespace atpg
