#pragma once

#include <iosfwd>
#include <string>

#include "atpg/forest.hpp"
#include "atpg/hybnn.hpp"
#include "atpg/svr.hpp"

namespace atpg {

// Versioned textual model files; doubles are written with 17 significant
// digits so save -> load round-trips bit-exactly.

void save_hybnn(std::ostream& out, const HybNNModel& model);
HybNNModel load_hybnn(std::istream& in);

void save_svr(std::ostream& out, const SvrModel& model);
SvrModel load_svr(std::istream& in);

void save_forest(std::ostream& out, const RandomForestMeta& model);
RandomForestMeta load_forest(std::istream& in);

struct HybMTBundle {
  RandomForestMeta meta;
  HybNNModel hybnn;
  SvrModel svr;
};

void save_hybnn_file(const std::string& path, const HybNNModel& model);
HybNNModel load_hybnn_file(const std::string& path);
void save_svr_file(const std::string& path, const SvrModel& model);
SvrModel load_svr_file(const std::string& path);
void save_forest_file(const std::string& path, const RandomForestMeta& model);
RandomForestMeta load_forest_file(const std::string& path);

// The bundle file names its three model files by path relative to its own
// directory.
void save_bundle(const std::string& bundle_path, const HybMTBundle& bundle);
HybMTBundle load_bundle(const std::string& bundle_path);

// "hybnn", "svr", "forest", or "bundle" from the file's magic line.
std::string detect_model_kind(const std::string& path);

}  // namespace atpg
