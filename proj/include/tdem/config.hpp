#pragma once

// Simulation configuration and the natural -> SI conversion used for the
// surface charge output. Internally everything runs in natural units
// (c = hbar = eps0 = mu0 = 1) with lengths in cavity units.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdem/cavity.hpp"
#include "tdem/error.hpp"

namespace tdem {

struct SiScale {
  static constexpr double kHbar = 1.054571817e-34;   // J s
  static constexpr double kLightSpeed = 299792458.0;  // m / s
  static constexpr double kEpsilon0 = 8.8541878128e-12;  // F / m

  double L_meters = 0.0;
  std::optional<double> omega1_rad_s;

  /// C m^-2 per natural unit of surface charge (cavity side as length unit).
  double sigma_factor() const {
    return std::sqrt(kEpsilon0 * kHbar * kLightSpeed) / (L_meters * L_meters);
  }

  bool operator==(const SiScale&) const = default;
};

/// Surface charge in C m^-2 from its value in L = 1 cavity units.
inline double sigma_to_si(double sigma_natural, const std::optional<SiScale>& scale) {
  if (!scale) throw ConfigError("si.L_meters", "SI output requested but no SI scale configured");
  if (!(scale->L_meters > 0.0)) throw ConfigError("si.L_meters", "must be positive");
  return sigma_natural * scale->sigma_factor();
}

struct SimulationConfig {
  double cavity_side_L = 2.0 * std::numbers::pi;
  double epsilon_static = 1.0;
  double delta = 0.0;
  double drive_omega = 1.0;
  double t_max = 0.0;
  double dt = 0.1;
  std::vector<ModeIndex> mode_list{{1, 0, 0}};
  std::vector<int> polarizations{0, 1, 2, 3};
  std::array<double, 4> initial_occupations{};
  int fock_cutoff = 40;
  std::map<std::string, double> tolerances{
      {"symplectic", 1e-9}, {"leakage", 1e-8}, {"rwa_relative", 0.05}, {"max_step_phase", 0.1}};
  std::optional<SiScale> si_scale;
  std::optional<std::string> table_path;  // tabulated eps(t) CSV
  std::string output_path = "out";
  std::string output_format = "csv";
  std::size_t output_stride = 1;

  double tolerance(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ConfigError("tolerances." + name, "unknown tolerance");
    return it->second;
  }

  bool operator==(const SimulationConfig&) const = default;
};

/// Throws ConfigError naming the failed check.
inline void validate(const SimulationConfig& c) {
  if (!(c.cavity_side_L > 0.0)) throw ConfigError("cavity.L", "cavity side must be positive");
  if (!(c.epsilon_static >= 1.0)) throw ConfigError("medium.epsilon", "static permittivity must be >= 1");
  if (!(c.delta >= 0.0)) throw ConfigError("medium.delta", "modulation amplitude must be non-negative");
  if (!(2.0 * c.delta < c.epsilon_static)) {
    throw ConfigError("medium.delta", "permittivity may become non-positive: require 2*delta < epsilon");
  }
  if (!(c.drive_omega > 0.0) && c.delta > 0.0) throw ConfigError("medium.omega", "drive frequency must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("run.dt", "step must be positive");
  if (!(c.t_max >= 0.0)) throw ConfigError("run.t_max", "must be non-negative");
  if (c.fock_cutoff < 2) throw ConfigError("oracle.cutoff", "Fock cutoff must be >= 2");
  if (c.mode_list.empty()) throw ConfigError("run.modes", "at least one mode required");
  for (const auto& n : c.mode_list) {
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) {
      throw ConfigError("run.modes", "zero mode (0,0,0) is excluded");
    }
  }
  if (c.polarizations.empty()) throw ConfigError("run.polarizations", "at least one polarization required");
  std::set<int> seen;
  for (int l : c.polarizations) {
    if (l < 0 || l > 3) throw ConfigError("run.polarizations", "lambda must be in {0,1,2,3}");
    if (!seen.insert(l).second) throw ConfigError("run.polarizations", "duplicate lambda " + std::to_string(l));
  }
  for (double n : c.initial_occupations) {
    if (!(n >= 0.0)) throw ConfigError("initial.n_bar", "mean occupations must be non-negative");
  }
  for (const auto& [k, v] : c.tolerances) {
    if (!(v > 0.0)) throw ConfigError("tolerances." + k, "must be positive");
  }
  if (c.si_scale && !(c.si_scale->L_meters > 0.0)) throw ConfigError("si.L_meters", "must be positive");
  if (c.output_format != "csv" && c.output_format != "json") {
    throw ConfigError("output.format", "must be 'csv' or 'json'");
  }
  if (c.output_stride == 0) throw ConfigError("output.stride", "must be >= 1");
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& doc, const std::string& section, const std::string& key) {
  const std::string name = section + "." + key;
  if (!doc.contains(section) || !doc.at(section).is_object()) throw ConfigError(name, "missing required key");
  const auto& s = doc.at(section);
  if (!s.contains(key)) throw ConfigError(name, "missing required key");
  return s.at(key);
}

inline const nlohmann::json* optional_key(const nlohmann::json& doc, const std::string& section, const std::string& key) {
  if (!doc.contains(section)) return nullptr;
  const auto& s = doc.at(section);
  if (!s.is_object()) throw ConfigError(section, "must be an object");
  return s.contains(key) ? &s.at(key) : nullptr;
}

inline double number(const nlohmann::json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name, "expected a number");
  return v.get<double>();
}

inline int integer(const nlohmann::json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError(name, "expected an integer");
  return v.get<int>();
}

}  // namespace detail

/// Parses and validates a configuration document. See docs/config.md for the schema.
inline SimulationConfig load_config(const nlohmann::json& doc) {
  using detail::integer;
  using detail::number;
  using detail::optional_key;
  using detail::require;
  if (!doc.is_object()) throw ConfigError("<root>", "configuration must be an object");
  SimulationConfig c;
  c.cavity_side_L = number(require(doc, "cavity", "L"), "cavity.L");
  c.epsilon_static = number(require(doc, "medium", "epsilon"), "medium.epsilon");
  c.delta = number(require(doc, "medium", "delta"), "medium.delta");
  const auto& om = require(doc, "medium", "omega");
  if (om.is_string()) {
    if (om.get<std::string>() != "resonant") throw ConfigError("medium.omega", "expected a number or \"resonant\"");
    if (!(c.cavity_side_L > 0.0) || !(c.epsilon_static > 0.0)) {
      throw ConfigError("medium.omega", "\"resonant\" needs positive cavity.L and medium.epsilon");
    }
    c.drive_omega = 2.0 * std::numbers::pi / (c.cavity_side_L * std::sqrt(c.epsilon_static));
  } else {
    c.drive_omega = number(om, "medium.omega");
  }
  if (const auto* tbl = optional_key(doc, "medium", "table")) {
    if (!tbl->is_string()) throw ConfigError("medium.table", "expected a path string");
    c.table_path = tbl->get<std::string>();
  }

  c.t_max = number(require(doc, "run", "t_max"), "run.t_max");
  c.dt = number(require(doc, "run", "dt"), "run.dt");
  const auto& modes = require(doc, "run", "modes");
  if (!modes.is_array()) throw ConfigError("run.modes", "expected a list of integer triples");
  c.mode_list.clear();
  for (const auto& m : modes) {
    if (!m.is_array() || m.size() != 3) throw ConfigError("run.modes", "each mode must be an integer triple");
    c.mode_list.push_back({integer(m[0], "run.modes"), integer(m[1], "run.modes"), integer(m[2], "run.modes")});
  }
  const auto& pols = require(doc, "run", "polarizations");
  if (!pols.is_array()) throw ConfigError("run.polarizations", "expected a list of integers");
  c.polarizations.clear();
  for (const auto& p : pols) c.polarizations.push_back(integer(p, "run.polarizations"));

  if (const auto* nb = optional_key(doc, "initial", "n_bar")) {
    if (!nb->is_array() || nb->size() != 4) throw ConfigError("initial.n_bar", "expected four numbers (lambda 0..3)");
    for (int l = 0; l < 4; ++l) c.initial_occupations[l] = number((*nb)[l], "initial.n_bar");
  }
  if (const auto* d = optional_key(doc, "oracle", "cutoff")) c.fock_cutoff = integer(*d, "oracle.cutoff");
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "must be an object");
    for (const auto& [k, v] : t.items()) c.tolerances[k] = number(v, "tolerances." + k);
  }
  if (const auto* lm = optional_key(doc, "si", "L_meters")) {
    SiScale s;
    s.L_meters = number(*lm, "si.L_meters");
    if (const auto* w = optional_key(doc, "si", "omega1_rad_s")) s.omega1_rad_s = number(*w, "si.omega1_rad_s");
    c.si_scale = s;
  } else if (optional_key(doc, "si", "omega1_rad_s")) {
    throw ConfigError("si.L_meters", "required when si.omega1_rad_s is given");
  }
  if (const auto* p = optional_key(doc, "output", "path")) {
    if (!p->is_string()) throw ConfigError("output.path", "expected a string");
    c.output_path = p->get<std::string>();
  }
  if (const auto* f = optional_key(doc, "output", "format")) {
    if (!f->is_string()) throw ConfigError("output.format", "expected a string");
    c.output_format = f->get<std::string>();
  }
  if (const auto* s = optional_key(doc, "output", "stride")) {
    const int v = integer(*s, "output.stride");
    if (v < 1) throw ConfigError("output.stride", "must be >= 1");
    c.output_stride = static_cast<std::size_t>(v);
  }
  validate(c);
  return c;
}

inline SimulationConfig load_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  return load_config(doc);
}

inline SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto c = load_config_text(text);
  // A relative table path is taken relative to the config file.
  if (c.table_path && std::filesystem::path(*c.table_path).is_relative()) {
    c.table_path = (std::filesystem::path(path).parent_path() / *c.table_path).lexically_normal().string();
  }
  return c;
}

inline nlohmann::json to_json(const SimulationConfig& c) {
  nlohmann::json doc;
  doc["cavity"]["L"] = c.cavity_side_L;
  doc["medium"]["epsilon"] = c.epsilon_static;
  doc["medium"]["delta"] = c.delta;
  doc["medium"]["omega"] = c.drive_omega;
  if (c.table_path) doc["medium"]["table"] = *c.table_path;
  doc["run"]["t_max"] = c.t_max;
  doc["run"]["dt"] = c.dt;
  doc["run"]["modes"] = nlohmann::json::array();
  for (const auto& m : c.mode_list) doc["run"]["modes"].push_back({m[0], m[1], m[2]});
  doc["run"]["polarizations"] = c.polarizations;
  doc["initial"]["n_bar"] = c.initial_occupations;
  doc["oracle"]["cutoff"] = c.fock_cutoff;
  for (const auto& [k, v] : c.tolerances) doc["tolerances"][k] = v;
  if (c.si_scale) {
    doc["si"]["L_meters"] = c.si_scale->L_meters;
    if (c.si_scale->omega1_rad_s) doc["si"]["omega1_rad_s"] = *c.si_scale->omega1_rad_s;
  }
  doc["output"]["path"] = c.output_path;
  doc["output"]["format"] = c.output_format;
  doc["output"]["stride"] = c.output_stride;
  return doc;
}

}  // namespace tdem
