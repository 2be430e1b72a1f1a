#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfif/model.hpp"

// Plain-text key=value configuration, CSV artifacts and experiment manifests.

namespace mfif {

using KeyValues = std::map<std::string, std::string>;

// Parses `key = value` lines; '#' starts a comment; blank lines ignored.
KeyValues parse_config_text(const std::string& text);
KeyValues load_config_file(const std::string& path);

struct RunSettings {
  ModelConfig cfg;
  double grid_dt = 1e-3;
  double grid_dy = 2.5e-3;
  double grid_ymin = 0.0;  // 0 = automatic truncation
  std::uint64_t seed = 0;
  bool seed_set = false;
};

// Recognized keys: drift.kind, drift.lambda, alpha, sigma, x0, epsilon, T,
// grid.dt, grid.dy, grid.ymin, seed.
RunSettings settings_from_keyvalues(const KeyValues& kv);

// CSV writing: rows of formatted doubles with a header line.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

std::string read_file(const std::string& path);

// FNV-1a 64-bit content hash, hex encoded.
std::string fnv1a_hex(const std::string& content);

struct Manifest {
  KeyValues config;
  std::string version;
  std::vector<std::string> outputs;  // file paths, hashed on write
  double wall_seconds = 0.0;
  long peak_rss_kb = 0;
};

void write_manifest(const std::string& path, const Manifest& m);

long current_peak_rss_kb();

}  // namespace mfif
