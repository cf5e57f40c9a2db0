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

#ifndef BECIMP_CONFIG_HPP_
#define BECIMP_CONFIG_HPP_

#include <map>
#include <string>
#include <vector>

#include "becimp/bogoliubov.hpp"
#include "becimp/params.hpp"

namespace becimp {

// Flat key/value configuration. Every documented key always has a value;
// presets fill them from figure-caption parameter sets. Units:
//   bec.mass_kg, lattice.mass_kg       kg
//   bec.density                        m^-D
//   bec.g, coupling.kappa*             E_R lambda^D
//   bec.temperature_nK                 nK
//   lattice.wavelength_nm              nm
//   lattice.J, lattice.U, lattice.K    E_R
//   lattice.omega_t                    rad/s (0: derived from lattice.depth)
//   lattice.depth                      E_R
// List values are comma separated.
class Config {
 public:
  Config();  // preset "fig3"

  static Config preset(const std::string& name);
  static const std::vector<std::string>& preset_names();
  static const std::vector<std::string>& known_keys();

  // `key = value` lines ('#' comments) or a JSON object (nested objects are
  // flattened with '.'). A `preset` entry is applied before the others.
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  // Throws Error(kConfig) for unknown keys; the message lists valid keys.
  void set(const std::string& key, const std::string& value);
  // "key=value".
  void apply(const std::string& assignment);

  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

Model build_model(const Config& config);
GridSpec build_grid_spec(const Config& config);

}  // namespace becimp

#endif  // BECIMP_CONFIG_HPP_
