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

#include "becimp/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "becimp/error.hpp"

namespace becimp {

namespace {

// (x - sin x) / x^3
double cubic_remainder(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 1e-2) {
    return 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362880.0;
  }
  return (x - std::sin(x)) / (x2 * x);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double PotentialTable::at(int offset) const {
  const int d = std::abs(offset);
  if (d <= max_offset) return values[d];
  if (max_offset < 1) return 0.0;
  const double last = values[max_offset];
  const double prev = values[max_offset - 1];
  if (!(last > 0.0) || !(prev > last)) return 0.0;
  return last * std::pow(last / prev, d - max_offset);
}

std::vector<double> mediated_potentials(const Model& m,
                                        const std::vector<double>& separations,
                                        const GridSpec& spec,
                                        double* residual) {
  if (separations.empty()) return {};
  std::vector<double> dr(separations.size());
  for (std::size_t k = 0; k < dr.size(); ++k) dr[k] = separations[k] * m.spacing;
  const Oscillation osc{max_abs(dr), 0.0};
  auto eval = [&](const MomentumGrid& g) {
    std::vector<double> out(dr.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = g.magnitude[i];
      const double base =
          g.weight[i] * coupling_weight(m, q) / dispersion(m, q).phonon_energy;
      for (std::size_t k = 0; k < dr.size(); ++k) {
        out[k] += base * g.separation_factor(i, dr[k]);
      }
    }
    return out;
  };
  ConvergedSum s = converge(m, spec, osc, eval);
  if (residual) *residual = s.residual;
  return s.values;
}

double mediated_potential(const Model& m, double separation_sites,
                          const GridSpec& spec) {
  return mediated_potentials(m, {separation_sites}, spec)[0];
}

PotentialTable potential_table(const Model& m, int max_offset,
                               const GridSpec& spec) {
  if (max_offset < 0) {
    throw Error(ErrorCode::kInvalidParameter, "potential table range must be >= 0");
  }
  std::vector<double> seps(max_offset + 1);
  for (int d = 0; d <= max_offset; ++d) seps[d] = d;
  PotentialTable t;
  t.dimension = m.dimension;
  t.max_offset = max_offset;
  t.values = mediated_potentials(m, seps, spec, &t.residual);
  return t;
}

double mediated_potential_3d_closed(const Model& m, double separation_sites) {
  if (m.dimension != 3) {
    throw Error(ErrorCode::kUnsupportedDimension,
                "the closed-form mediated potential is defined for D = 3");
  }
  if (!(separation_sites > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "closed-form potential diverges at zero separation");
  }
  const double r = separation_sites * m.spacing;
  const double xi = m.closed_form_length();
  const double g = m.gn0 / m.density;
  return m.kappa * m.kappa * xi * std::exp(-std::numbers::sqrt2 * r / xi) /
         (std::numbers::pi * g * xi * xi * xi * r);
}

double polaron_energy(const Model& m, const GridSpec& spec) {
  return mediated_potential(m, 0.0, spec);
}

double transient_phase(const Model& m, double separation_sites, double t,
                       const GridSpec& spec) {
  if (t < 0.0) throw Error(ErrorCode::kDomain, "time must be >= 0");
  if (t == 0.0) return 0.0;
  const double dr = separation_sites * m.spacing;
  auto eval = [&](const MomentumGrid& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = g.magnitude[i];
      const double w = dispersion(m, q).phonon_energy;
      const double x = w * t;
      sum += g.weight[i] * coupling_weight(m, q) * g.separation_factor(i, dr) *
             t * t * x * cubic_remainder(x);
    }
    return std::vector<double>{sum};
  };
  return converge(m, spec, Oscillation{std::abs(dr), t}, eval).values[0];
}

double phase_calibrated_time(const Model& m, double separation_sites,
                             double target_phase, const GridSpec& spec) {
  const double v = mediated_potential(m, separation_sites, spec);
  if (!(v > 0.0) || !(target_phase > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "phase calibration needs a positive potential and target");
  }
  auto f = [&](double t) {
    return transient_phase(m, separation_sites, t, spec) - target_phase;
  };
  // The transient offset is bounded, so the root lies near target/V.
  double hi = target_phase / v;
  while (f(hi) < 0.0) hi *= 1.5;
  double lo = 0.0;
  for (int it = 0; it < 80 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace becimp
