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

#ifndef BECIMP_DEPHASING_HPP_
#define BECIMP_DEPHASING_HPP_

#include <vector>

#include "becimp/bogoliubov.hpp"
#include "becimp/params.hpp"

namespace becimp {

// Times in hbar/E_R, temperatures in nK, separations in lattice sites.

struct GammaTriple {
  double gamma0 = 1.0;
  double gamma_minus = 1.0;
  double gamma_plus = 1.0;
  double time = 0.0;
  double temperature_nk = 0.0;
  double separation_sites = 0.0;
  // Set for D = 1: the exponents grow without bound with t and separation,
  // so values are meaningful only at the finite (t, d) requested.
  bool one_dimensional_caveat = false;
};

// kFinite uses (1 - cos omega t); kLongTime replaces it by its time average 1.
enum class TimeMode { kFinite, kLongTime };

// Shared exponents of the triple for the state-dependent coupling
// kappa1 - kappa0:
//   base  = sum d_q (1 - cos w t) (2N+1) / w^2
//   cross = sum d_q (1 - cos w t) (2N+1) cos(q.dr) / w^2
struct DephasingExponents {
  double base = 0.0;
  double cross = 0.0;
  double residual = 0.0;
};

DephasingExponents dephasing_exponents(const Model& model,
                                       double separation_sites, double t,
                                       double temperature_nk,
                                       const GridSpec& spec = {},
                                       TimeMode mode = TimeMode::kFinite);

// Several separations on one grid (the largest fixes the panel layout).
std::vector<DephasingExponents> dephasing_exponents(
    const Model& model, const std::vector<double>& separations_sites, double t,
    double temperature_nk, const GridSpec& spec = {},
    TimeMode mode = TimeMode::kFinite);

// exp(-sum |F_b - F_a|^2 (1 - cos w t)(2N+1)/w^2) for two sites `separation`
// apart, with coupling model.kappa.
double gamma_pair(const Model& model, double separation_sites, double t,
                  double temperature_nk, const GridSpec& spec = {},
                  TimeMode mode = TimeMode::kFinite);

GammaTriple gamma_triple(const Model& model, double separation_sites, double t,
                         double temperature_nk, const GridSpec& spec = {},
                         TimeMode mode = TimeMode::kFinite);

// Triple from shared exponents: (exp(-E0), exp(-2E0+2Ec), exp(-2E0-2Ec)).
GammaTriple triple_from_exponents(const DephasingExponents& e);

enum class BoundRegime { kZeroTemperature, kHighTemperature, kNumerical };

struct GammaBound {
  double value = 1.0;
  BoundRegime regime = BoundRegime::kZeroTemperature;
};

// Thermodynamic-limit lower bound on the 3D dephasing factors, with
// xi = Model::closed_form_length():
//   k_B T <= 0.1 g n0:  exp(-4 kappa^2 / (sqrt2 pi^2 g^2 n0 xi^3))
//   k_B T >= 10 g n0:   exp(-kappa^2 k_B T / (sqrt2 pi g^3 n0^2 xi^3))
// and in between exp(-8 E) with E the long-time quadrature of the base
// exponent. Both closed forms equal exp(-8 E) in their own limits
// (E = E_u / 2 at T = 0, E = E_h / 8 at high T), so the branches join.
// Throws Error(kUnsupportedDimension) unless D = 3.
GammaBound gamma_bound_3d(const Model& model, double temperature_nk,
                          const GridSpec& spec = {});

// Zero-temperature bound exp(-c kappa^2 / (sqrt2 pi^2 g^2 n0 xi^3)) used
// for the gate estimate with c = 1, 2, 4 for Gamma_0, Gamma_-, Gamma_+.
// c = 4 reproduces the zero-temperature branch of gamma_bound_3d.
double gate_dephasing_bound(const Model& model, double c);

// High-temperature branch alone.
double gamma_bound_3d_high_temperature(const Model& model,
                                       double temperature_nk);

}  // namespace becimp

#endif  // BECIMP_DEPHASING_HPP_
