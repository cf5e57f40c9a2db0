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

#ifndef BECIMP_BOGOLIUBOV_HPP_
#define BECIMP_BOGOLIUBOV_HPP_

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "becimp/params.hpp"

namespace becimp {

// All quantities in lattice units (see Model): wavenumbers in 1/lambda,
// energies in E_R, coupling weights in E_R^2 lambda^D.

struct Dispersion {
  double free_energy = 0.0;   // epsilon_q
  double phonon_energy = 0.0; // hbar omega_q = sqrt(eps (eps + 2 g n0))
};

// Throws Error(kDomain) for q <= 0.
Dispersion dispersion(const Model& model, double q);

// Group velocity d(hbar omega)/dq.
double group_velocity(const Model& model, double q);

using Vec3 = std::array<double, 3>;

// Gaussian-Wannier form factor Omega^{-1/2} exp(i q.r_j) exp(-q^2 x0^2/4).
// Only the first `model.dimension` components of the vectors are used.
std::complex<double> form_factor(const Model& model, const Vec3& q,
                                 const Vec3& site_position, double volume);

// d_q = kappa^2 n0 (eps_q / hbar omega_q) exp(-q^2 x0^2 / 2), the
// volume-normalised squared coupling. Throws Error(kDomain) for q <= 0.
double coupling_weight(const Model& model, double q);
double coupling_weight(const Model& model, double q, double kappa);

// F_{j,q} = kappa sqrt(n0 eps_q / hbar omega_q) f_j(q).
std::complex<double> coupling(const Model& model, const Vec3& q,
                              const Vec3& site_position, double volume);

enum class GridMode { kThermodynamic, kFinite };

struct GridSpec {
  GridMode mode = GridMode::kThermodynamic;
  double q_max_factor = 1.0;
  double tolerance = 1e-8;
  int order = 20;            // Gauss-Legendre nodes per panel
  int base_panels = 16;      // panels across [0, q_max] without oscillation
  double panel_phase = 4.0;  // oscillation phase per panel, in units of pi
  int max_refinements = 7;   // panel doublings before giving up
  // Finite mode: q = 2 pi n / L per axis, |n_i| <= n_max, L in sites.
  int n_max = 400;
  double length_sites = 800.0;
};

// Node set for a primed momentum sum. Thermodynamic grids are radial: the
// angular integral is done analytically and `separation_factor` supplies the
// matching kernel (cos in 1D with +-q folded, J0 in 2D, sinc in 3D). Finite
// grids list every vector mode except q = 0; separations are taken along the
// first axis.
struct MomentumGrid {
  int dimension = 1;
  GridMode mode = GridMode::kThermodynamic;
  bool radial = true;
  bool zero_mode_excluded = true;
  double q_max = 0.0;
  double volume = 0.0;  // Omega in lambda^D for finite grids
  int refinement = 0;
  std::vector<double> magnitude;
  std::vector<double> weight;
  std::vector<Vec3> vector;  // finite grids only

  std::size_t size() const { return magnitude.size(); }

  // Real part of the angular average of exp(i q.dr) for node i and a
  // separation dr (lambda) along the first axis.
  double separation_factor(std::size_t i, double separation) const;

  // Imaginary counterpart: zero for radial grids; sin(q_x dr) for finite.
  double separation_factor_imag(std::size_t i, double separation) const;
};

// Radial cutoff max(8/x0, 20/xi) times q_max_factor. Throws Error(kConfig)
// when q_max x0 < 4.
double radial_cutoff(const Model& model, const GridSpec& spec);

// Oscillation the grid must resolve: max |separation| in lambda and max time
// in hbar/E_R. Panels are distributed so each spans a fixed phase of
// q*separation + omega_q*t on top of a uniform base resolution.
struct Oscillation {
  double separation = 0.0;
  double time = 0.0;
};

MomentumGrid make_grid(const Model& model, const GridSpec& spec,
                       const Oscillation& osc, int refinement = 0);

// Finite grid on a ring/torus of `length_sites` sites with |n_i| <= n_max.
MomentumGrid make_finite_grid(const Model& model, double length_sites,
                              int n_max);

struct ConvergedSum {
  std::vector<double> values;
  MomentumGrid grid;
  double residual = 0.0;
};

// Evaluates `eval` on successively refined grids until the largest change,
// relative to the largest magnitude among the outputs, is <= tolerance.
// Finite grids are evaluated once. Throws AccuracyError with the last
// residual when max_refinements is exhausted.
ConvergedSum converge(
    const Model& model, const GridSpec& spec, const Oscillation& osc,
    const std::function<std::vector<double>(const MomentumGrid&)>& eval);

// (1 - cos x) / x^2 with a series below |x| = 1e-3.
double one_minus_cos_over_sq(double x);
// sin(x) / x with a series below |x| = 1e-3.
double sinc(double x);

}  // namespace becimp

#endif  // BECIMP_BOGOLIUBOV_HPP_
