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

#ifndef BECIMP_QUBITGATE_HPP_
#define BECIMP_QUBITGATE_HPP_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>

#include "becimp/bogoliubov.hpp"
#include "becimp/dephasing.hpp"
#include "becimp/params.hpp"

namespace becimp {

// Two-qubit density matrix in the basis |00>, |01>, |10>, |11>.
using Matrix4 = Eigen::Matrix4cd;

// Throws Error(kState) unless rho is Hermitian (1e-10), has unit trace
// (1e-12) and no eigenvalue below -1e-10.
void validate_state(const Matrix4& rho);

// Exact reduced dynamics: populations and |01><10| type elements keep or
// scale according to the parity and pair pattern of the indices.
Matrix4 apply_dephasing(const Matrix4& rho, const GammaTriple& gamma);

struct KrausSet {
  std::array<Matrix4, 6> ops;
  std::array<double, 6> weights{};  // squared prefactors
};

// Six-operator decomposition. Throws Error(kDecompositionUnavailable) when
// 1 - 2 Gamma_0 + Gamma_+ < 0 or Gamma_- < Gamma_+ (beyond -1e-14).
KrausSet kraus_set(const GammaTriple& gamma);

Matrix4 apply_kraus(const KrausSet& k, const Matrix4& rho);

// (4 + 4 Gamma_0 + Gamma_- + Gamma_+) / 10.
double average_fidelity(const GammaTriple& gamma);

// (sum_j |tr E_j|^2 + d) / (d (d + 1)), d = 4.
double average_fidelity_from_kraus(const KrausSet& k);

// Average of <psi| channel(|psi><psi|) |psi> over Haar-random pure states,
// using the element-wise channel.
struct SampledFidelity {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};
SampledFidelity sampled_average_fidelity(const GammaTriple& gamma,
                                         std::size_t samples,
                                         std::uint64_t seed);

// Gamma_- = Gamma_+ = Gamma_0^2: (2 + 2 Gamma_0 + Gamma_0^2) / 5.
double independent_reservoir_fidelity(double gamma0);

// True when Gamma_+ + Gamma_- < 2 Gamma_0^2.
bool worse_than_independent_reservoirs(const GammaTriple& gamma);

// hbar pi / V12 in hbar/E_R for V12 in E_R. Throws Error(kDomain) for V12 <= 0.
double gate_time(double v12);

// diag(1, 1, 1, e^{i phi}).
Matrix4 controlled_phase(double phi);

enum class GateMode { kBound, kQuadrature };

struct GateOptions {
  GateMode mode = GateMode::kBound;
  double separation_sites = 1.0;
  // kQuadrature only: gate time in hbar/E_R; <= 0 calibrates the
  // accumulated two-body phase to pi.
  double time = 0.0;
};

struct GateReport {
  double gate_time = 0.0;      // hbar/E_R
  double gate_time_ms = 0.0;
  double potential = 0.0;      // V12 in E_R
  GammaTriple gamma;
  double avg_fidelity = 0.0;
  double independent_reservoir_fidelity = 0.0;
  bool kraus_available = false;
  std::string mode;
};

// kBound: Yukawa V12, t_g = hbar pi / V12, and the zero-temperature 3D
// bounds with c = 1, 2, 4. kQuadrature: quadrature V12, the
// phase-calibrated (or given) time and the finite-time triple.
GateReport gate_report(const Model& model, const GateOptions& options,
                       const GridSpec& spec = {});

}  // namespace becimp

#endif  // BECIMP_QUBITGATE_HPP_
