// Copyright 2026 The becimp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "becimp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "becimp/error.hpp"

namespace becimp {

namespace {

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double recoil_energy(double impurity_mass, double wavelength_m) {
  const double h = 2.0 * std::numbers::pi * si::kHbar;
  return h * h / (2.0 * impurity_mass * wavelength_m * wavelength_m);
}

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d = {
      {"preset", "fig3"},
      {"bec.mass_kg", format(species::kRubidium87)},
      {"bec.density", "5e6"},
      {"bec.g", "1.1e-2"},
      {"bec.temperature_nK", "3"},
      {"bec.dimension", "1"},
      {"lattice.wavelength_nm", "790"},
      {"lattice.mass_kg", format(species::kPotassium41)},
      {"lattice.J", "0"},
      {"lattice.U", "0"},
      {"lattice.K", "0"},
      {"lattice.omega_t", "0"},
      {"lattice.depth", "5"},
      {"lattice.sites", "200"},
      {"coupling.kappa", "2.5e-2"},
      {"coupling.kappa0", "0"},
      {"coupling.kappa1", ""},
      {"grid.mode", "thermodynamic"},
      {"grid.q_max_factor", "1"},
      {"grid.tolerance", "1e-8"},
      {"grid.order", "20"},
      {"grid.n_max", "400"},
      {"grid.length_sites", "800"},
      {"regime.threshold", "0.1"},
      {"potential.delta_max", "20"},
      {"scan.axis", "time"},
      {"scan.start", ""},
      {"scan.stop", ""},
      {"scan.points", "41"},
      {"scan.time_ms", "10"},
      {"scan.distance_sites", "5"},
      {"scan.long_time", "false"},
      {"gate.mode", "bound"},
      {"gate.separation_sites", "1"},
      {"gate.time_ms", "0"},
      {"mc.steps", "2000000"},
      {"mc.equilibration", "200000"},
      {"mc.sample_interval", "1000"},
      {"mc.seeds", "20"},
      {"mc.potential_mode", "nn"},
      {"mc.atoms", "40"},
      {"mc.temperatures_nK", "1,2,3,4,5,6,8,10,13,16,20"},
      {"mc.move", "global"},
      {"mc.pair_counting", "auto"},
      {"mc.delta_max", "20"},
      {"mc.snapshot", "false"},
      {"transport.t_end_ms", "8.2"},
      {"transport.samples", "83"},
      {"transport.start_site", "-1"},
      {"transport.kappas", "0,0.0025,0.005,0.0075,0.01,0.0125,0.015,0.0175,0.0194"},
      {"transport.periods", "2"},
      {"transport.positivity_tolerance", "1e-6"},
  };
  return d;
}

Config make_preset(const std::string& name) {
  Config c;
  if (name == "fig3") return c;
  auto set = [&](const std::string& k, const std::string& v) { c.set(k, v); };
  set("preset", name);
  if (name == "fig2") {
    set("lattice.mass_kg", format(species::kCaesium133));
    set("lattice.depth", "40");
    set("bec.g", "4.5e-2");
    set("coupling.kappa", "3.5e-2");
    set("bec.temperature_nK", "5");
    set("scan.time_ms", "10");
    set("scan.distance_sites", "5");
  } else if (name == "fig4" || name == "fig6") {
    set("lattice.J", "0.03");
    set("lattice.depth", "9");
    set("lattice.sites", "0");
    // The time-local equation is not completely positive at these
    // parameters; violations are recorded rather than fatal.
    set("transport.positivity_tolerance", "0.1");
    if (name == "fig4") {
      set("bec.temperature_nK", "100");
      set("coupling.kappa", "1.94e-2");
    } else {
      set("bec.temperature_nK", "75");
      set("coupling.kappa", "1.6e-2");
      const double er = recoil_energy(species::kPotassium41, 790e-9);
      set("lattice.K", format(si::kHbar * 1.5e3 / er));
      set("transport.kappas", "0,1.6e-2");
    }
  } else if (name == "fig5") {
    set("bec.dimension", "2");
    set("bec.density", "25e12");
    set("bec.g", "5.1e-3");
    set("coupling.kappa", "1.87e-2");
    set("bec.temperature_nK", "1.8");
    set("lattice.sites", "50");
    set("mc.atoms", "100");
    set("mc.temperatures_nK", "1.2,1.5,1.8,2.7,3.1");
    set("mc.steps", "4000000");
    set("mc.equilibration", "1000000");
  } else if (name == "gate3d") {
    set("bec.dimension", "3");
    set("bec.mass_kg", format(species::kSodium23));
    set("lattice.mass_kg", format(species::kCaesium133));
    set("bec.density", "1.25e20");
    set("bec.g", "1.5e-2");
    set("coupling.kappa", "1.1e-2");
    set("bec.temperature_nK", "0");
    set("lattice.depth", "40");
    set("lattice.sites", "2");
  } else {
    std::string list;
    for (const auto& p : Config::preset_names()) list += " " + p;
    throw Error(ErrorCode::kConfig, "unknown preset '" + name + "'; valid:" + list);
  }
  return c;
}

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    std::string joined;
    for (const auto& v : j) {
      if (!joined.empty()) joined += ",";
      joined += v.is_string() ? v.get<std::string>() : v.dump();
    }
    out.emplace_back(prefix, joined);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

Config::Config() : values_(defaults()) {}

const std::vector<std::string>& Config::preset_names() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig4",
                                                 "fig5", "fig6", "gate3d"};
  return names;
}

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, value] : defaults()) k.push_back(key);
    return k;
  }();
  return keys;
}

Config Config::preset(const std::string& name) { return make_preset(name); }

Config Config::parse(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kConfig, std::string("invalid JSON config: ") + e.what());
    }
    flatten(j, "", entries);
  } else {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kConfig,
                    "config line " + std::to_string(lineno) + " is not key = value");
      }
      entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  Config c;
  for (const auto& [k, v] : entries) {
    if (k == "preset") c = make_preset(v);
  }
  for (const auto& [k, v] : entries) {
    if (k != "preset") c.set(k, v);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& key, const std::string& value) {
  if (!defaults().count(key)) {
    std::string list;
    for (const auto& k : known_keys()) list += " " + k;
    throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'; valid keys:" + list);
  }
  values_[key] = value;
}

void Config::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::kConfig, "override '" + assignment + "' is not key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key == "preset") {
    Config fresh = make_preset(value);
    for (const auto& [k, v] : values_) {
      if (k != "preset" && v != defaults().at(k)) fresh.values_[k] = v;
    }
    *this = fresh;
    return;
  }
  set(key, value);
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  const std::string& s = get(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig, "config key '" + key + "' is not a number: '" + s + "'");
}

long long Config::integer(const std::string& key) const {
  const double v = number(key);
  if (std::floor(v) != v || std::abs(v) > 9e15) {
    throw Error(ErrorCode::kConfig, "config key '" + key + "' must be an integer");
  }
  return static_cast<long long>(v);
}

bool Config::flag(const std::string& key) const {
  std::string s = get(key);
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
  throw Error(ErrorCode::kConfig, "config key '" + key + "' is not a boolean");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (!trim(item.substr(used)).empty()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, "config key '" + key + "' has a non-numeric entry '" + item + "'");
    }
  }
  return out;
}

Model build_model(const Config& c) {
  BecParams bec;
  LatticeParams lat;
  CouplingParams cpl;
  const long long dim = c.integer("bec.dimension");
  if (dim < 1 || dim > 3) throw Error(ErrorCode::kConfig, "bec.dimension must be 1, 2 or 3");
  bec.dimension = static_cast<int>(dim);
  bec.boson_mass_kg = c.number("bec.mass_kg");
  bec.density = c.number("bec.density");
  bec.temperature_k = c.number("bec.temperature_nK") * 1e-9;
  lat.wavelength_m = c.number("lattice.wavelength_nm") * 1e-9;
  lat.impurity_mass_kg = c.number("lattice.mass_kg");
  if (!(lat.wavelength_m > 0.0) || !(lat.impurity_mass_kg > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "wavelength and impurity mass must be positive");
  }
  const double er = recoil_energy(lat.impurity_mass_kg, lat.wavelength_m);
  const double scale = er * std::pow(lat.wavelength_m, bec.dimension);
  bec.coupling_g = c.number("bec.g") * scale;
  lat.hopping_j = c.number("lattice.J") * er;
  lat.onsite_u = c.number("lattice.U") * er;
  lat.stark_k = c.number("lattice.K") * er;
  const double omega = c.number("lattice.omega_t");
  lat.trap_frequency = omega > 0.0
                           ? omega
                           : trap_frequency_from_depth(c.number("lattice.depth"),
                                                       lat.wavelength_m,
                                                       lat.impurity_mass_kg);
  const long long sites = c.integer("lattice.sites");
  lat.site_count = static_cast<int>(std::max<long long>(sites, 2));
  cpl.kappa = c.number("coupling.kappa") * scale;
  cpl.kappa0 = c.number("coupling.kappa0") * scale;
  if (!c.get("coupling.kappa1").empty()) cpl.kappa1 = c.number("coupling.kappa1") * scale;
  return make_model(bec, lat, cpl);
}

GridSpec build_grid_spec(const Config& c) {
  GridSpec s;
  const std::string& mode = c.get("grid.mode");
  if (mode == "thermodynamic") {
    s.mode = GridMode::kThermodynamic;
  } else if (mode == "finite") {
    s.mode = GridMode::kFinite;
  } else {
    throw Error(ErrorCode::kConfig, "grid.mode must be thermodynamic or finite");
  }
  s.q_max_factor = c.number("grid.q_max_factor");
  s.tolerance = c.number("grid.tolerance");
  s.order = static_cast<int>(c.integer("grid.order"));
  s.n_max = static_cast<int>(c.integer("grid.n_max"));
  s.length_sites = c.number("grid.length_sites");
  if (!(s.tolerance > 0.0)) throw Error(ErrorCode::kConfig, "grid.tolerance must be positive");
  return s;
}

}  // namespace becimp
