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

#include "becimp/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "becimp/error.hpp"

namespace becimp {

namespace {

void check_inputs(double t, double temperature_nk) {
  if (t < 0.0) throw Error(ErrorCode::kDomain, "time must be >= 0");
  if (temperature_nk < 0.0) {
    throw Error(ErrorCode::kDomain, "temperature must be >= 0");
  }
}

std::vector<DephasingExponents> exponents_with_kappa(
    const Model& m, double kappa, const std::vector<double>& seps, double t,
    double temperature_nk, const GridSpec& spec, TimeMode mode) {
  check_inputs(t, temperature_nk);
  const std::size_t n = seps.size();
  std::vector<DephasingExponents> out(n);
  if (n == 0) return out;
  if (kappa == 0.0 || (mode == TimeMode::kFinite && t == 0.0)) return out;

  const double kt = m.thermal_energy(temperature_nk);
  std::vector<double> dr(n);
  double max_dr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    dr[k] = seps[k] * m.spacing;
    max_dr = std::max(max_dr, std::abs(dr[k]));
  }
  const bool long_time = mode == TimeMode::kLongTime;
  const Oscillation osc{max_dr, long_time ? 0.0 : t};

  // Layout: [base, cross_0 ... cross_{n-1}].
  auto eval = [&](const MomentumGrid& g) {
    std::vector<double> acc(n + 1, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = g.magnitude[i];
      const double w = dispersion(m, q).phonon_energy;
      const double time_factor =
          long_time ? 1.0 / (w * w) : t * t * one_minus_cos_over_sq(w * t);
      const double term = g.weight[i] * coupling_weight(m, q, kappa) *
                          thermal_factor(w, kt) * time_factor;
      acc[0] += term;
      for (std::size_t k = 0; k < n; ++k) {
        acc[k + 1] += term * g.separation_factor(i, dr[k]);
      }
    }
    return acc;
  };
  const ConvergedSum s = converge(m, spec, osc, eval);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].base = s.values[0];
    out[k].cross = s.values[k + 1];
    out[k].residual = s.residual;
  }
  return out;
}

}  // namespace

std::vector<DephasingExponents> dephasing_exponents(
    const Model& m, const std::vector<double>& seps, double t,
    double temperature_nk, const GridSpec& spec, TimeMode mode) {
  return exponents_with_kappa(m, m.kappa1 - m.kappa0, seps, t, temperature_nk,
                              spec, mode);
}

DephasingExponents dephasing_exponents(const Model& m, double separation_sites,
                                       double t, double temperature_nk,
                                       const GridSpec& spec, TimeMode mode) {
  return dephasing_exponents(m, std::vector<double>{separation_sites}, t,
                             temperature_nk, spec, mode)[0];
}

double gamma_pair(const Model& m, double separation_sites, double t,
                  double temperature_nk, const GridSpec& spec, TimeMode mode) {
  if (separation_sites == 0.0) {
    check_inputs(t, temperature_nk);
    return 1.0;
  }
  const DephasingExponents e =
      exponents_with_kappa(m, m.kappa, {separation_sites}, t, temperature_nk,
                           spec, mode)[0];
  return std::exp(-2.0 * (e.base - e.cross));
}

GammaTriple triple_from_exponents(const DephasingExponents& e) {
  GammaTriple g;
  g.gamma0 = std::exp(-e.base);
  g.gamma_minus = std::exp(-2.0 * (e.base - e.cross));
  g.gamma_plus = std::exp(-2.0 * (e.base + e.cross));
  return g;
}

GammaTriple gamma_triple(const Model& m, double separation_sites, double t,
                         double temperature_nk, const GridSpec& spec,
                         TimeMode mode) {
  GammaTriple g = triple_from_exponents(
      dephasing_exponents(m, separation_sites, t, temperature_nk, spec, mode));
  g.time = t;
  g.temperature_nk = temperature_nk;
  g.separation_sites = separation_sites;
  g.one_dimensional_caveat = m.dimension == 1;
  return g;
}

namespace {

void require_3d(const Model& m) {
  if (m.dimension != 3) {
    throw Error(ErrorCode::kUnsupportedDimension, "dephasing bounds need D = 3");
  }
}

}  // namespace

double gate_dephasing_bound(const Model& m, double c) {
  require_3d(m);
  const double xi = m.closed_form_length();
  const double g = m.gn0 / m.density;
  const double kappa = m.kappa1 - m.kappa0;
  const double e = kappa * kappa /
                   (std::numbers::sqrt2 * std::numbers::pi * std::numbers::pi *
                    g * g * m.density * xi * xi * xi);
  return std::exp(-c * e);
}

double gamma_bound_3d_high_temperature(const Model& m, double temperature_nk) {
  require_3d(m);
  const double xi = m.closed_form_length();
  const double g = m.gn0 / m.density;
  const double kappa = m.kappa1 - m.kappa0;
  const double kt = m.thermal_energy(temperature_nk);
  const double e = kappa * kappa * kt /
                   (std::numbers::sqrt2 * std::numbers::pi * g * g * g *
                    m.density * m.density * xi * xi * xi);
  return std::exp(-e);
}

GammaBound gamma_bound_3d(const Model& m, double temperature_nk,
                          const GridSpec& spec) {
  require_3d(m);
  if (temperature_nk < 0.0) {
    throw Error(ErrorCode::kDomain, "temperature must be >= 0");
  }
  const double kt = m.thermal_energy(temperature_nk);
  GammaBound b;
  if (kt <= 0.1 * m.gn0) {
    b.regime = BoundRegime::kZeroTemperature;
    b.value = gate_dephasing_bound(m, 4.0);
  } else if (kt >= 10.0 * m.gn0) {
    b.regime = BoundRegime::kHighTemperature;
    b.value = gamma_bound_3d_high_temperature(m, temperature_nk);
  } else {
    b.regime = BoundRegime::kNumerical;
    const DephasingExponents e = dephasing_exponents(
        m, 0.0, 0.0, temperature_nk, spec, TimeMode::kLongTime);
    b.value = std::exp(-8.0 * e.base);
  }
  return b;
}

}  // namespace becimp
