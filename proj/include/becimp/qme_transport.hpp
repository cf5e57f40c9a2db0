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

#ifndef BECIMP_QME_TRANSPORT_HPP_
#define BECIMP_QME_TRANSPORT_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "becimp/bogoliubov.hpp"
#include "becimp/params.hpp"

namespace becimp {

// Single impurity on a 1D hard-wall lattice. Times in hbar/E_R, energies in
// E_R, temperatures in nK.

using DensityMatrix = Eigen::MatrixXcd;

// sum_q d_q sin(w t)/w (2N+1) cos(q dr), with d_q for model.kappa.
double dissipative_kernel(const Model& model, double offset_sites, double t,
                          double temperature_nk, const GridSpec& spec = {});

// sum_q d_q (1 - cos w t)/w 2 cos(q dr).
double coherent_kernel(const Model& model, double offset_sites, double t,
                       const GridSpec& spec = {});

// K_dis(t_k, offset) for offsets 0 .. offsets-1 on a uniform time grid
// t_k = k * step, k = 0 .. count-1, for unit coupling (scale by kappa^2).
// Computed on one momentum grid converged at the latest time.
struct KernelCache {
  double step = 0.0;
  int offsets = 0;
  int times = 0;
  double temperature_nk = 0.0;
  double residual = 0.0;
  std::size_t nodes = 0;
  Eigen::MatrixXd values;  // times x offsets

  double at(int time_index, int offset) const {
    return values(time_index, offset);
  }
};

KernelCache dissipative_kernel_cache(const Model& model, int offsets,
                                     double step, int count,
                                     double temperature_nk,
                                     const GridSpec& spec = {});

struct EvolveOptions {
  int sites = 0;
  double t_end = 0.0;
  int samples = 100;            // stored states, evenly spaced incl. t = 0
  double dt = 0.0;              // <= 0: min(0.005/J, 0.005/K, 0.01 xi/c)
  double temperature_nk = 0.0;
  bool dissipative = true;      // false drops the bath term
  int positivity_interval = 100;
  double trace_tolerance = 1e-6;
  double positivity_tolerance = 1e-6;
  int max_halvings = 4;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  double dt = 0.0;
  long long steps = 0;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  long long negative_rate_events = 0;  // (t, offset) with K(t,0) < K(t,d)
  std::vector<std::string> notes;
};

// Integrates d rho/dt = -i[H, rho] - 2 [K(t,0) - K(t, m-m')] rho_{mm'} with
// H = -J (hopping) + K (j - j0) by fixed-step RK4 using kernels at the
// stage times. `cache` may be shared across runs that differ only in
// kappa; pass nullptr to build one. Throws Error(kIntegration) on trace
// drift or positivity loss.
Trajectory evolve(const Model& model, const DensityMatrix& rho0,
                  const EvolveOptions& options, const GridSpec& spec = {},
                  const KernelCache* cache = nullptr, int origin_site = 0);

// Default step from the hopping, tilt and bath time scales.
double default_time_step(const Model& model);

DensityMatrix localized_state(int sites, int site);

// Stats of the populations around j0 with sigma = sqrt(sum p_j (j - j0)^2)
// and the interval I = [j0 - sigma, j0 + sigma].
struct TransportStats {
  bool defined = false;
  double sigma = 0.0;
  double mean_density = 0.0;     // p-bar
  double density_spread = 0.0;   // p_d
};

TransportStats transport_stats(const DensityMatrix& rho, int origin_site);
double mean_position(const DensityMatrix& rho);
// sqrt(sum p_j (j - j0)^2)
double spread(const DensityMatrix& rho, int origin_site);

}  // namespace becimp

#endif  // BECIMP_QME_TRANSPORT_HPP_
