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

#include "becimp/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "becimp/error.hpp"

namespace becimp {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << value << ")";
    throw Error(ErrorCode::kInvalidParameter, os.str());
  }
}

}  // namespace

DerivedQuantities derive(const BecParams& bec, const LatticeParams& lattice) {
  require_positive(bec.boson_mass_kg, "bec.mass_kg");
  require_positive(bec.density, "bec.density");
  require_positive(bec.coupling_g, "bec.g");
  require_positive(lattice.wavelength_m, "lattice.wavelength");
  require_positive(lattice.impurity_mass_kg, "lattice.mass_kg");
  require_positive(lattice.trap_frequency, "lattice.omega_t");
  if (bec.dimension < 1 || bec.dimension > 3) {
    throw Error(ErrorCode::kInvalidParameter, "bec.dimension must be 1, 2 or 3");
  }
  if (bec.temperature_k < 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "temperature must be >= 0");
  }
  if (lattice.hopping_j < 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "lattice.J must be >= 0");
  }
  if (lattice.site_count < 2) {
    throw Error(ErrorCode::kInvalidParameter, "lattice.sites must be >= 2");
  }

  const double hbar = si::kHbar;
  const double gn0 = bec.coupling_g * bec.density;
  DerivedQuantities d;
  d.healing_length_m = hbar / std::sqrt(bec.boson_mass_kg * gn0);
  d.sound_speed_m_s = std::sqrt(gn0 / bec.boson_mass_kg);
  d.oscillator_length_m =
      std::sqrt(hbar / (lattice.impurity_mass_kg * lattice.trap_frequency));
  const double two_pi_hbar = 2.0 * std::numbers::pi * hbar;
  d.recoil_energy_j = two_pi_hbar * two_pi_hbar /
                      (2.0 * lattice.impurity_mass_kg * lattice.wavelength_m *
                       lattice.wavelength_m);
  d.site_spacing_m = lattice.wavelength_m / 2.0;
  return d;
}

double Model::free_energy(double k) const {
  return mass_ratio * k * k / (4.0 * std::numbers::pi * std::numbers::pi);
}

double Model::closed_form_length() const {
  return healing_length / std::numbers::sqrt2;
}

Model make_model(const BecParams& bec, const LatticeParams& lattice,
                 const CouplingParams& coupling) {
  Model m;
  m.bec = bec;
  m.lattice = lattice;
  m.coupling = coupling;
  m.derived = derive(bec, lattice);
  if (!std::isfinite(coupling.kappa)) {
    throw Error(ErrorCode::kInvalidParameter, "coupling.kappa must be finite");
  }

  const double er = m.derived.recoil_energy_j;
  const double lambda = lattice.wavelength_m;
  const double lambda_d = std::pow(lambda, bec.dimension);
  m.dimension = bec.dimension;
  m.mass_ratio = lattice.impurity_mass_kg / bec.boson_mass_kg;
  m.density = bec.density * lambda_d;
  m.gn0 = bec.coupling_g * bec.density / er;
  m.kappa = coupling.kappa / (er * lambda_d);
  m.kappa0 = coupling.kappa0.value_or(0.0) / (er * lambda_d);
  m.kappa1 = coupling.kappa1.value_or(coupling.kappa) / (er * lambda_d);
  m.x0 = m.derived.oscillator_length_m / lambda;
  m.spacing = 0.5;
  m.healing_length = m.derived.healing_length_m / lambda;
  m.time_unit_s = si::kHbar / er;
  m.sound_speed = m.derived.sound_speed_m_s * m.time_unit_s / lambda;
  m.hopping = lattice.hopping_j / er;
  m.onsite = lattice.onsite_u / er;
  m.stark = lattice.stark_k / er;
  m.temperature_nk = bec.temperature_k * 1e9;
  m.kelvin_per_nk_energy = si::kBoltzmann * 1e-9 / er;
  return m;
}

Model with_kappa(const Model& model, double kappa_lattice_units) {
  CouplingParams c = model.coupling;
  const double scale = model.recoil_energy_j() *
                       std::pow(model.lattice.wavelength_m, model.dimension);
  c.kappa = kappa_lattice_units * scale;
  c.kappa1.reset();
  return make_model(model.bec, model.lattice, c);
}

Model with_temperature(const Model& model, double temperature_nk) {
  BecParams b = model.bec;
  b.temperature_k = temperature_nk * 1e-9;
  return make_model(b, model.lattice, model.coupling);
}

double bose_occupation(double energy, double thermal_energy) {
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::kDomain, "thermal occupation needs a positive mode energy");
  }
  if (thermal_energy <= 0.0) return 0.0;
  return 1.0 / std::expm1(energy / thermal_energy);
}

double thermal_occupation(double energy_j, double temperature_k) {
  if (temperature_k < 0.0) {
    throw Error(ErrorCode::kDomain, "temperature must be >= 0");
  }
  return bose_occupation(energy_j, si::kBoltzmann * temperature_k);
}

double thermal_factor(double energy, double thermal_energy) {
  if (thermal_energy <= 0.0) return 1.0;
  const double x = energy / (2.0 * thermal_energy);
  if (x > 40.0) return 1.0;
  return 1.0 / std::tanh(x);
}

double trap_frequency_from_depth(double depth_er, double wavelength_m,
                                 double impurity_mass_kg) {
  const double two_pi_hbar = 2.0 * std::numbers::pi * si::kHbar;
  const double er = two_pi_hbar * two_pi_hbar /
                    (2.0 * impurity_mass_kg * wavelength_m * wavelength_m);
  return 2.0 * std::sqrt(depth_er) * er / si::kHbar;
}

std::vector<RegimeWarning> validate_regime(const Model& m,
                                           std::optional<double> polaron_energy,
                                           double threshold) {
  std::vector<RegimeWarning> out;
  if (m.kappa == 0.0) return out;

  auto check = [&](const char* name, double ratio, const char* what) {
    if (ratio >= threshold) {
      std::ostringstream os;
      os << what << ": ratio " << ratio << " >= " << threshold;
      out.push_back({name, ratio, threshold, os.str()});
    }
  };

  const double xi_d = std::pow(m.healing_length, m.dimension);
  check("weak_coupling", std::abs(m.kappa) / (m.gn0 * xi_d),
        "|kappa|/(g n0 xi^D) is not small");

  if (m.hopping > 0.0) {
    // Hopping speed J a / hbar in lattice units is J * spacing.
    check("markov", m.hopping * m.spacing / m.sound_speed,
          "hopping speed J a/hbar is not small against the sound speed");
    const double ep = polaron_energy.value_or(
        m.kappa * m.kappa / ((m.gn0 / m.density) * xi_d));
    check("born", std::abs(ep) / m.hopping,
          "polaron energy is not small against the hopping J");
  }
  return out;
}

}  // namespace becimp
