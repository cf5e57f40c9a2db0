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

#include "becimp/qubitgate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "becimp/error.hpp"
#include "becimp/interaction.hpp"
#include "becimp/rng.hpp"

namespace becimp {

namespace {

using Complex = std::complex<double>;

Matrix4 diagonal(double a, double b, double c, double d) {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

// Scale factor for rho(row, col) with two-bit indices row = 2i + j.
double element_factor(int row, int col, const GammaTriple& g) {
  if (row == col) return 1.0;
  const int parity = (row >> 1) + (row & 1) + (col >> 1) + (col & 1);
  if (parity % 2 == 1) return g.gamma0;
  if ((row == 1 && col == 2) || (row == 2 && col == 1)) return g.gamma_minus;
  return g.gamma_plus;  // |00><11| and |11><00|
}

}  // namespace

void validate_state(const Matrix4& rho) {
  if (!rho.allFinite()) throw Error(ErrorCode::kState, "state has non-finite entries");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) {
    std::ostringstream os;
    os << "state is not Hermitian (max deviation " << herm << ")";
    throw Error(ErrorCode::kState, os.str());
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "state trace " << tr.real() << " differs from 1";
    throw Error(ErrorCode::kState, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix4> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::kState, "state has a negative eigenvalue");
  }
}

Matrix4 apply_dephasing(const Matrix4& rho, const GammaTriple& g) {
  validate_state(rho);
  Matrix4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = rho(r, c) * element_factor(r, c, g);
  }
  return out;
}

KrausSet kraus_set(const GammaTriple& g) {
  KrausSet k;
  k.weights = {(1.0 + 2.0 * g.gamma0 + g.gamma_plus) / 4.0,
               (1.0 - 2.0 * g.gamma0 + g.gamma_plus) / 4.0,
               (1.0 - g.gamma_minus) / 4.0,
               (1.0 - g.gamma_minus) / 4.0,
               (g.gamma_minus - g.gamma_plus) / 4.0,
               (g.gamma_minus - g.gamma_plus) / 4.0};
  for (std::size_t i = 0; i < k.weights.size(); ++i) {
    if (k.weights[i] < -1e-14) {
      std::ostringstream os;
      os << "Kraus weight " << i + 1 << " is negative (" << k.weights[i]
         << "); use the element-wise channel";
      throw Error(ErrorCode::kDecompositionUnavailable, os.str());
    }
    if (k.weights[i] < 0.0) k.weights[i] = 0.0;
  }
  const std::array<Matrix4, 6> shapes = {
      Matrix4(Matrix4::Identity()), diagonal(1, -1, -1, 1),
      diagonal(1, 1, -1, -1),       diagonal(1, -1, 1, -1),
      diagonal(-1, 1, 1, 1),        diagonal(1, 1, 1, -1)};
  for (std::size_t i = 0; i < 6; ++i) k.ops[i] = std::sqrt(k.weights[i]) * shapes[i];
  return k;
}

Matrix4 apply_kraus(const KrausSet& k, const Matrix4& rho) {
  Matrix4 out = Matrix4::Zero();
  for (const Matrix4& e : k.ops) out += e * rho * e.adjoint();
  return out;
}

double average_fidelity(const GammaTriple& g) {
  return (4.0 + 4.0 * g.gamma0 + g.gamma_minus + g.gamma_plus) / 10.0;
}

double average_fidelity_from_kraus(const KrausSet& k) {
  constexpr double d = 4.0;
  double sum = 0.0;
  for (const Matrix4& e : k.ops) sum += std::norm(e.trace());
  return (sum + d) / (d * (d + 1.0));
}

SampledFidelity sampled_average_fidelity(const GammaTriple& g,
                                         std::size_t samples,
                                         std::uint64_t seed) {
  CounterRng rng(seed, 0x4a11);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Eigen::Vector4cd psi;
    for (int i = 0; i < 4; ++i) psi(i) = Complex(rng.normal(), rng.normal());
    psi.normalize();
    Matrix4 rho = psi * psi.adjoint();
    rho /= rho.trace().real();
    double f = 0.0;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        f += (std::conj(psi(r)) * rho(r, c) * element_factor(r, c, g) * psi(c)).real();
      }
    }
    sum += f;
    sum_sq += f * f;
  }
  SampledFidelity out;
  out.samples = samples;
  if (samples == 0) return out;
  const double n = static_cast<double>(samples);
  out.mean = sum / n;
  const double var = samples > 1 ? (sum_sq - n * out.mean * out.mean) / (n - 1.0) : 0.0;
  out.standard_error = std::sqrt(std::max(var, 0.0) / n);
  return out;
}

double independent_reservoir_fidelity(double gamma0) {
  return (2.0 + 2.0 * gamma0 + gamma0 * gamma0) / 5.0;
}

bool worse_than_independent_reservoirs(const GammaTriple& g) {
  return g.gamma_plus + g.gamma_minus < 2.0 * g.gamma0 * g.gamma0;
}

double gate_time(double v12) {
  if (!(v12 > 0.0)) {
    throw Error(ErrorCode::kDomain, "gate time needs a positive interaction");
  }
  return std::numbers::pi / v12;
}

Matrix4 controlled_phase(double phi) {
  Matrix4 u = Matrix4::Identity();
  u(3, 3) = std::polar(1.0, phi);
  return u;
}

GateReport gate_report(const Model& m, const GateOptions& opt,
                       const GridSpec& spec) {
  GateReport r;
  const double temperature = m.temperature_nk;
  if (opt.mode == GateMode::kBound) {
    r.mode = "bound";
    r.potential = mediated_potential_3d_closed(m, opt.separation_sites);
    r.gate_time = gate_time(r.potential);
    r.gamma.gamma0 = gate_dephasing_bound(m, 1.0);
    r.gamma.gamma_minus = gate_dephasing_bound(m, 2.0);
    r.gamma.gamma_plus = gate_dephasing_bound(m, 4.0);
    r.gamma.temperature_nk = temperature;
    r.gamma.separation_sites = opt.separation_sites;
    r.gamma.time = std::numeric_limits<double>::infinity();
  } else {
    r.mode = "quadrature";
    r.potential = mediated_potential(m, opt.separation_sites, spec);
    r.gate_time = opt.time > 0.0
                      ? opt.time
                      : phase_calibrated_time(m, opt.separation_sites,
                                              std::numbers::pi, spec);
    r.gamma = gamma_triple(m, opt.separation_sites, r.gate_time, temperature, spec);
  }
  r.gate_time_ms = m.to_seconds(r.gate_time) * 1e3;
  r.avg_fidelity = average_fidelity(r.gamma);
  r.independent_reservoir_fidelity = independent_reservoir_fidelity(r.gamma.gamma0);
  try {
    kraus_set(r.gamma);
    r.kraus_available = true;
  } catch (const Error&) {
    r.kraus_available = false;
  }
  return r;
}

}  // namespace becimp
