#ifndef DXXZ_CONFIG_HPP
#define DXXZ_CONFIG_HPP

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dxxz/errors.hpp"
#include "dxxz/evolution.hpp"
#include "dxxz/lattice.hpp"
#include "dxxz/operators.hpp"

namespace dxxz {

namespace config_detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(trim(s.substr(pos)));
      break;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

}  // namespace config_detail

// Flat key/value store under dotted keys "section.key". Values stay strings
// until a typed getter is called, so error messages can carry the key path.
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap parse(std::istream& in, const std::string& origin = "<config>") {
    ConfigMap cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = config_detail::trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
        section = config_detail::trim(t.substr(1, t.size() - 2));
        if (section.empty())
          throw ParseError(origin + ":" + std::to_string(lineno) + ": empty section name");
        continue;
      }
      const std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ParseError(origin + ":" + std::to_string(lineno) + ": expected key = value");
      if (section.empty())
        throw ParseError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
      const std::string key = config_detail::trim(t.substr(0, eq));
      const std::string value = config_detail::trim(t.substr(eq + 1));
      if (key.empty())
        throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
      const std::string dotted = section + "." + key;
      if (cfg.values_.count(dotted))
        throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key " + dotted);
      cfg.values_[dotted] = value;
    }
    return cfg;
  }

  static ConfigMap parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open config file: " + path);
    return parse(in, path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  // Overrides (e.g. command-line flags) replace whatever the file said.
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void erase(const std::string& key) { values_.erase(key); }

  std::string get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("missing config key: " + key);
    used_.insert(key);
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  long get_int(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const long out = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
      throw ParseError("config key " + key + ": expected integer, got '" + v + "'");
    return out;
  }
  long get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  double get_double(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
      throw ParseError("config key " + key + ": expected number, got '" + v + "'");
    return out;
  }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  bool get_bool(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError("config key " + key + ": expected boolean, got '" + v + "'");
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
  }

  // Keys that were parsed but never consumed by a getter. Typo detection.
  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

inline LatticeGraph lattice_from_config(const ConfigMap& cfg) {
  const std::string kind = cfg.get_string("lattice.kind", "chain");
  const bool periodic = cfg.get_bool("lattice.periodic", true);
  if (kind == "chain")
    return LatticeGraph::chain(static_cast<int>(cfg.get_int("lattice.length")), periodic);
  if (kind == "square")
    return LatticeGraph::square(static_cast<int>(cfg.get_int("lattice.lx")),
                                static_cast<int>(cfg.get_int("lattice.ly")), periodic);
  if (kind == "custom") {
    const int sites = static_cast<int>(cfg.get_int("lattice.sites"));
    std::vector<Bond> bonds;
    for (const std::string& tok : config_detail::split(cfg.get_string("lattice.edges"), ',')) {
      if (tok.empty()) continue;
      const std::size_t dash = tok.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
        throw ParseError("lattice.edges: expected 1-based pairs like 1-2, got '" + tok + "'");
      char* end = nullptr;
      const long a = std::strtol(tok.c_str(), &end, 10);
      if (*end != '-') throw ParseError("lattice.edges: bad token '" + tok + "'");
      const long b = std::strtol(end + 1, &end, 10);
      if (*end != '\0') throw ParseError("lattice.edges: bad token '" + tok + "'");
      bonds.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1)});
    }
    return LatticeGraph::custom(sites, bonds);
  }
  throw InvalidArgument("lattice.kind must be chain, square, or custom; got '" + kind + "'");
}

inline ModelParams model_from_config(const ConfigMap& cfg) {
  ModelParams p;
  p.j_perp = cfg.get_double("model.j_perp");
  p.j_par_bar = cfg.get_double("model.j_par_bar");
  p.omega = cfg.get_double("model.omega");
  const bool has_a = cfg.has("model.amplitude_a");
  const bool has_dj = cfg.has("model.delta_j");
  if (has_a && has_dj)
    throw InvalidArgument("set model.amplitude_a or model.delta_j, not both");
  if (!has_a && !has_dj)
    throw InvalidArgument("one of model.amplitude_a or model.delta_j is required");
  if (has_a) {
    p.amplitude_a = cfg.get_double("model.amplitude_a");
  } else {
    p = ModelParams::with_delta_j(p.j_perp, p.j_par_bar, p.omega,
                                  cfg.get_double("model.delta_j"));
  }
  p.validate_driven();
  return p;
}

// "every:dt" or an explicit comma-separated list of times.
inline std::vector<double> parse_snapshot_times(const std::string& text, double t_max) {
  std::vector<double> out;
  if (text.rfind("every:", 0) == 0) {
    char* end = nullptr;
    const std::string rest = text.substr(6);
    const double step = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str() || *end != '\0' || !(step > 0))
      throw ParseError("snapshots: expected every:<positive step>, got '" + text + "'");
    for (long k = 1; k * step <= t_max + 1e-9; ++k) out.push_back(k * step);
    return out;
  }
  for (const std::string& tok : config_detail::split(text, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const double t = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ParseError("snapshots: bad time '" + tok + "'");
    out.push_back(t);
  }
  return out;
}

inline EvolutionConfig evolution_from_config(const ConfigMap& cfg) {
  EvolutionConfig e;
  e.steps_per_period = static_cast<int>(cfg.get_int("evolve.steps_per_period", 64));
  e.t_max = cfg.get_double("evolve.t_max", 50.0);
  e.krylov_dim = static_cast<int>(cfg.get_int("evolve.krylov_dim", 20));
  e.tolerance = cfg.get_double("evolve.tolerance", 1e-10);
  e.snapshot_times =
      parse_snapshot_times(cfg.get_string("evolve.snapshots", "every:0.5"), e.t_max);
  e.validate();
  return e;
}

struct RunSetup {
  LatticeGraph graph;
  int two_s;
  ModelParams params;
  EvolutionConfig evolve;
};

inline RunSetup run_setup_from_config(const ConfigMap& cfg) {
  RunSetup r{lattice_from_config(cfg), static_cast<int>(cfg.get_int("model.two_s", 1)),
             model_from_config(cfg), evolution_from_config(cfg)};
  if (r.two_s < 1) throw InvalidArgument("model.two_s must be >= 1");
  return r;
}

}  // namespace dxxz

#endif
