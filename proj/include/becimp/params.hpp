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

#ifndef BECIMP_PARAMS_HPP_
#define BECIMP_PARAMS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace becimp {

namespace si {
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K
inline constexpr double kAtomicMass = 1.66053906660e-27;  // kg
}  // namespace si

namespace species {
inline constexpr double kSodium23 = 22.9897692820 * si::kAtomicMass;
inline constexpr double kPotassium41 = 40.9618252579 * si::kAtomicMass;
inline constexpr double kRubidium87 = 86.9091805310 * si::kAtomicMass;
inline constexpr double kCaesium133 = 132.9054519610 * si::kAtomicMass;
}  // namespace species

// Condensate parameters in SI units. `density` is in m^-D and `coupling_g`
// in J m^D.
struct BecParams {
  double boson_mass_kg = species::kRubidium87;
  double density = 5e6;
  double coupling_g = 0.0;
  double temperature_k = 0.0;
  int dimension = 1;
};

// Lattice parameters in SI units (energies in J, trap frequency in rad/s).
struct LatticeParams {
  double wavelength_m = 790e-9;
  double impurity_mass_kg = species::kPotassium41;
  double hopping_j = 0.0;
  double onsite_u = 0.0;
  double trap_frequency = 0.0;
  double stark_k = 0.0;
  int site_count = 2;
};

// Interspecies density-density coupling in J m^D. The per-internal-state
// values are used by the two-qubit dephasing path; kappa0 defaults to zero and
// kappa1 to `kappa`.
struct CouplingParams {
  double kappa = 0.0;
  std::optional<double> kappa0;
  std::optional<double> kappa1;
};

struct DerivedQuantities {
  double healing_length_m = 0.0;    // hbar / sqrt(m_b g n0)
  double sound_speed_m_s = 0.0;     // sqrt(g n0 / m_b)
  double oscillator_length_m = 0.0; // sqrt(hbar / m_l omega_t)
  double recoil_energy_j = 0.0;     // (2 pi hbar)^2 / (2 m_l lambda^2)
  double site_spacing_m = 0.0;      // lambda / 2
};

// Throws Error(kInvalidParameter) on non-positive masses, density, coupling,
// wavelength or trap frequency.
DerivedQuantities derive(const BecParams& bec, const LatticeParams& lattice);

// Resolved parameter set in lattice units: energies in E_R, lengths in
// lambda, times in hbar/E_R, temperatures in nK. Momenta are in 1/lambda.
// Conversion to and from SI happens only in make_model() and the accessors
// below.
struct Model {
  BecParams bec;
  LatticeParams lattice;
  CouplingParams coupling;
  DerivedQuantities derived;

  int dimension = 1;
  double mass_ratio = 1.0;      // m_l / m_b
  double density = 0.0;         // n0 lambda^D
  double gn0 = 0.0;             // g n0 / E_R
  double kappa = 0.0;           // kappa / (E_R lambda^D)
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double x0 = 0.0;              // oscillator length / lambda
  double spacing = 0.5;         // a / lambda
  double healing_length = 0.0;  // xi / lambda
  double sound_speed = 0.0;     // c hbar / (lambda E_R)
  double hopping = 0.0;         // J / E_R
  double onsite = 0.0;          // U / E_R
  double stark = 0.0;           // K / E_R
  double temperature_nk = 0.0;
  double kelvin_per_nk_energy = 0.0;  // k_B * 1 nK / E_R
  double time_unit_s = 0.0;           // hbar / E_R

  double recoil_energy_j() const { return derived.recoil_energy_j; }
  double thermal_energy(double temperature_nk) const {
    return temperature_nk * kelvin_per_nk_energy;
  }
  double to_seconds(double t) const { return t * time_unit_s; }
  double from_seconds(double seconds) const { return seconds / time_unit_s; }

  // Free-particle energy of a condensate atom with wavenumber k.
  double free_energy(double k) const;

  // Length hbar / sqrt(2 m_b g n0), in lambda. The closed-form thermodynamic
  // limits (Yukawa potential, 3D dephasing bounds) are written in terms of
  // this length; it equals healing_length / sqrt(2).
  double closed_form_length() const;
};

Model make_model(const BecParams& bec, const LatticeParams& lattice,
                 const CouplingParams& coupling);

// Copies with one field replaced; the lattice-unit fields are recomputed.
Model with_kappa(const Model& model, double kappa_lattice_units);
Model with_temperature(const Model& model, double temperature_nk);

// Bose occupation 1/(exp(E/k_B T) - 1) for energy in J and T in K. Returns 0
// at T = 0. Throws Error(kDomain) for energy <= 0.
double thermal_occupation(double energy_j, double temperature_k);

// Same occupation with energy and thermal energy in any common unit.
double bose_occupation(double energy, double thermal_energy);

// 2 N + 1 = coth(E / 2 k_B T), evaluated without forming N.
double thermal_factor(double energy, double thermal_energy);

// Harmonic approximation of the on-site trap frequency for a lattice of depth
// `depth_er` recoils: hbar omega_t = 2 sqrt(V0) E_R.
double trap_frequency_from_depth(double depth_er, double wavelength_m,
                                 double impurity_mass_kg);

struct RegimeWarning {
  std::string condition;
  double ratio = 0.0;
  double threshold = 0.0;
  std::string message;
};

// Advisory validity checks. A condition is reported when its dimensionless
// ratio reaches `threshold`:
//   weak_coupling   |kappa| / (g n0 xi^D)
//   markov          J a / (hbar c)
//   born            E_p / J            (only for J > 0)
// With kappa = 0 there is no bath coupling and nothing is reported. When
// `polaron_energy` (in E_R) is absent the scaling estimate kappa^2/(g xi^D)
// is used for the Born ratio.
std::vector<RegimeWarning> validate_regime(
    const Model& model, std::optional<double> polaron_energy = std::nullopt,
    double threshold = 0.1);

}  // namespace becimp

#endif  // BECIMP_PARAMS_HPP_
