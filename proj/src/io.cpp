#include "mfif/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <sys/resource.h>

namespace mfif {

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value, got: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyValues load_config_file(const std::string& path) {
  return parse_config_text(read_file(path));
}

RunSettings settings_from_keyvalues(const KeyValues& kv) {
  static const char* known[] = {"drift.kind", "drift.lambda", "alpha",
                                "sigma",      "x0",           "epsilon",
                                "T",          "grid.dt",      "grid.dy",
                                "grid.ymin",  "seed"};
  for (const auto& [k, v] : kv) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw std::runtime_error("config: unknown key: " + k);
  }
  auto get = [&](const std::string& k, const std::string& dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  };
  auto getd = [&](const std::string& k, double dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : std::stod(it->second);
  };

  std::string kind = get("drift.kind", "zero");
  DriftSpec drift;
  if (kind == "zero") {
    drift = DriftSpec::zero();
  } else if (kind == "linear") {
    drift = DriftSpec::linear(getd("drift.lambda", 1.0));
  } else {
    throw std::runtime_error("config: unknown drift.kind: " + kind);
  }

  double alpha = getd("alpha", 0.05);
  double sigma = getd("sigma", 1.0);
  double x0 = getd("x0", 0.8);
  double T = getd("T", 1.0);

  RunSettings rs{
      ModelConfig::make(drift, alpha, sigma, InitialLaw::dirac(x0), T,
                        kv.count("epsilon")
                            ? std::optional<double>(getd("epsilon", 0.0))
                            : std::nullopt),
      getd("grid.dt", 1e-3), getd("grid.dy", 2.5e-3), getd("grid.ymin", 0.0),
      0, false};
  if (kv.count("seed")) {
    rs.seed = std::stoull(kv.at("seed"));
    rs.seed_set = true;
  }
  return rs;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << '\n';
  out << std::setprecision(12);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

std::string fnv1a_hex(const std::string& content) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

void write_manifest(const std::string& path, const Manifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "version = " << m.version << '\n';
  for (const auto& [k, v] : m.config) out << "config." << k << " = " << v << '\n';
  for (const auto& f : m.outputs)
    out << "output = " << f << " sha=fnv1a:" << fnv1a_hex(read_file(f)) << '\n';
  out << std::setprecision(6) << "wall_seconds = " << m.wall_seconds << '\n';
  out << "peak_rss_kb = " << m.peak_rss_kb << '\n';
}

long current_peak_rss_kb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss;
}

}  // namespace mfif
