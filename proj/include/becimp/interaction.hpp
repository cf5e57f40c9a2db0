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

#ifndef BECIMP_INTERACTION_HPP_
#define BECIMP_INTERACTION_HPP_

#include <vector>

#include "becimp/bogoliubov.hpp"
#include "becimp/params.hpp"

namespace becimp {

// Phonon-mediated attraction between impurities. Values are stored as the
// positive magnitude V; the lattice Hamiltonian carries it as -sum V n n.
// Energies in E_R, separations in lattice sites.

struct PotentialTable {
  int dimension = 1;
  int max_offset = 0;
  double residual = 0.0;
  std::size_t nodes = 0;
  std::vector<double> values;  // V(0), V(1), ..., V(max_offset)

  // V(|offset|); beyond max_offset the last two entries are extended as an
  // exponential tail.
  double at(int offset) const;
};

// Sum over modes of d_q cos(q.dr) / hbar omega_q.
double mediated_potential(const Model& model, double separation_sites,
                          const GridSpec& spec = {});

// Values at arbitrary separations computed on one shared grid.
std::vector<double> mediated_potentials(const Model& model,
                                        const std::vector<double>& separations,
                                        const GridSpec& spec = {},
                                        double* residual = nullptr);

PotentialTable potential_table(const Model& model, int max_offset = 20,
                               const GridSpec& spec = {});

// Yukawa form kappa^2 xi exp(-sqrt2 r/xi) / (pi g xi^3 r) with
// xi = Model::closed_form_length(). Throws Error(kDomain) for r <= 0 and
// Error(kUnsupportedDimension) unless D = 3.
double mediated_potential_3d_closed(const Model& model, double separation_sites);

// E_p = V(0).
double polaron_energy(const Model& model, const GridSpec& spec = {});

// Two-body phase sum_q d_q cos(q.dr) (omega t - sin omega t) / omega^2, in
// radians, for t in hbar/E_R.
double transient_phase(const Model& model, double separation_sites, double t,
                       const GridSpec& spec = {});

// Smallest t with transient_phase(t) = target (default pi), found by
// bracketing from the asymptotic estimate target/V.
double phase_calibrated_time(const Model& model, double separation_sites,
                             double target_phase, const GridSpec& spec = {});

}  // namespace becimp

#endif  // BECIMP_INTERACTION_HPP_
