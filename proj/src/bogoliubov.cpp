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

#include "becimp/bogoliubov.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "becimp/error.hpp"

namespace becimp {

namespace {

constexpr double kPi = std::numbers::pi;

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  Rule r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[i]);
    } else {
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
    }
  }
  return r;
}

const Rule& rule(int order) {
  static const Rule r10 = make_rule<10>();
  static const Rule r15 = make_rule<15>();
  static const Rule r20 = make_rule<20>();
  static const Rule r25 = make_rule<25>();
  static const Rule r30 = make_rule<30>();
  switch (order) {
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 25: return r25;
    case 30: return r30;
    default:
      throw Error(ErrorCode::kConfig,
                  "grid.order must be one of 10, 15, 20, 25, 30");
  }
}

void require_positive_q(double q) {
  if (!(q > 0.0)) {
    throw Error(ErrorCode::kDomain, "zero or negative wavenumber: modes with q = 0 are excluded");
  }
}

// Radial measure of d^Dq / (2 pi)^D after the angular integral.
double radial_measure(int dimension, double q) {
  switch (dimension) {
    case 1: return 1.0 / kPi;
    case 2: return q / (2.0 * kPi);
    default: return q * q / (2.0 * kPi * kPi);
  }
}

}  // namespace

double one_minus_cos_over_sq(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 1e-3) return 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / x2;
}

double sinc(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 1e-3) return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  return std::sin(x) / x;
}

Dispersion dispersion(const Model& m, double q) {
  require_positive_q(q);
  Dispersion d;
  d.free_energy = m.free_energy(q);
  d.phonon_energy = std::sqrt(d.free_energy * (d.free_energy + 2.0 * m.gn0));
  return d;
}

double group_velocity(const Model& m, double q) {
  const Dispersion d = dispersion(m, q);
  const double deps = 2.0 * d.free_energy / q;
  return deps * (d.free_energy + m.gn0) / d.phonon_energy;
}

std::complex<double> form_factor(const Model& m, const Vec3& q,
                                 const Vec3& r, double volume) {
  if (!(volume > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "quantisation volume must be positive");
  }
  double phase = 0.0;
  double q2 = 0.0;
  for (int i = 0; i < m.dimension; ++i) {
    phase += q[i] * r[i];
    q2 += q[i] * q[i];
  }
  const double amp = std::exp(-0.25 * q2 * m.x0 * m.x0) / std::sqrt(volume);
  return std::polar(amp, phase);
}

double coupling_weight(const Model& m, double q, double kappa) {
  const Dispersion d = dispersion(m, q);
  return kappa * kappa * m.density * (d.free_energy / d.phonon_energy) *
         std::exp(-0.5 * q * q * m.x0 * m.x0);
}

double coupling_weight(const Model& m, double q) {
  return coupling_weight(m, q, m.kappa);
}

std::complex<double> coupling(const Model& m, const Vec3& q, const Vec3& r,
                              double volume) {
  double q2 = 0.0;
  for (int i = 0; i < m.dimension; ++i) q2 += q[i] * q[i];
  const Dispersion d = dispersion(m, std::sqrt(q2));
  return m.kappa * std::sqrt(m.density * d.free_energy / d.phonon_energy) *
         form_factor(m, q, r, volume);
}

double MomentumGrid::separation_factor(std::size_t i, double separation) const {
  if (!radial) return std::cos(vector[i][0] * separation);
  const double x = magnitude[i] * separation;
  switch (dimension) {
    case 1: return std::cos(x);
    case 2: return std::cyl_bessel_j(0.0, std::abs(x));
    default: return sinc(x);
  }
}

double MomentumGrid::separation_factor_imag(std::size_t i,
                                            double separation) const {
  if (radial) return 0.0;
  return std::sin(vector[i][0] * separation);
}

double radial_cutoff(const Model& m, const GridSpec& spec) {
  if (!(spec.q_max_factor > 0.0)) {
    throw Error(ErrorCode::kConfig, "grid.q_max_factor must be positive");
  }
  const double q_max =
      std::max(8.0 / m.x0, 20.0 / m.healing_length) * spec.q_max_factor;
  if (q_max * m.x0 < 4.0) {
    std::ostringstream os;
    os << "radial cutoff q_max x0 = " << q_max * m.x0
       << " < 4 does not resolve the Gaussian form factor";
    throw Error(ErrorCode::kConfig, os.str());
  }
  return q_max;
}

MomentumGrid make_grid(const Model& m, const GridSpec& spec,
                       const Oscillation& osc, int refinement) {
  if (spec.mode == GridMode::kFinite) {
    return make_finite_grid(m, spec.length_sites, spec.n_max);
  }
  if (spec.base_panels < 1 || !(spec.panel_phase > 0.0)) {
    throw Error(ErrorCode::kConfig, "grid panel settings must be positive");
  }
  const Rule& gl = rule(spec.order);
  const double q_max = radial_cutoff(m, spec);
  const double sep = std::abs(osc.separation);
  const double t = std::abs(osc.time);
  const double panel = spec.panel_phase * kPi;
  const double base_rate = spec.base_panels * panel / q_max;

  auto phase = [&](double q) {
    const double w = q > 0.0 ? dispersion(m, q).phonon_energy : 0.0;
    return base_rate * q + sep * q + w * t;
  };
  const double total = phase(q_max);
  const long panels =
      static_cast<long>(std::ceil(total / panel)) << std::max(refinement, 0);

  std::vector<double> edges(panels + 1);
  edges[0] = 0.0;
  edges[panels] = q_max;
  for (long k = 1; k < panels; ++k) {
    const double target = total * static_cast<double>(k) / panels;
    double lo = edges[k - 1];
    double hi = q_max;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * q_max; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phase(mid) < target ? lo : hi) = mid;
    }
    edges[k] = 0.5 * (lo + hi);
  }

  MomentumGrid g;
  g.dimension = m.dimension;
  g.mode = GridMode::kThermodynamic;
  g.radial = true;
  g.q_max = q_max;
  g.refinement = refinement;
  g.magnitude.reserve(panels * gl.nodes.size());
  g.weight.reserve(panels * gl.nodes.size());
  for (long k = 0; k < panels; ++k) {
    const double mid = 0.5 * (edges[k] + edges[k + 1]);
    const double half = 0.5 * (edges[k + 1] - edges[k]);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double q = mid + half * gl.nodes[i];
      g.magnitude.push_back(q);
      g.weight.push_back(half * gl.weights[i] * radial_measure(m.dimension, q));
    }
  }
  return g;
}

MomentumGrid make_finite_grid(const Model& m, double length_sites, int n_max) {
  if (!(length_sites > 0.0) || n_max < 1) {
    throw Error(ErrorCode::kConfig, "finite grid needs length_sites > 0 and n_max >= 1");
  }
  const int d = m.dimension;
  const double length = length_sites * m.spacing;
  const double dq = 2.0 * kPi / length;
  MomentumGrid g;
  g.dimension = d;
  g.mode = GridMode::kFinite;
  g.radial = false;
  g.volume = std::pow(length, d);
  g.q_max = dq * n_max * std::sqrt(static_cast<double>(d));
  const double w = 1.0 / g.volume;
  const int span = 2 * n_max + 1;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= span;
  g.magnitude.reserve(total - 1);
  g.weight.reserve(total - 1);
  g.vector.reserve(total - 1);
  for (long idx = 0; idx < total; ++idx) {
    Vec3 q{0.0, 0.0, 0.0};
    long rest = idx;
    bool zero = true;
    for (int i = 0; i < d; ++i) {
      const int n = static_cast<int>(rest % span) - n_max;
      rest /= span;
      q[i] = dq * n;
      if (n != 0) zero = false;
    }
    if (zero) continue;
    g.vector.push_back(q);
    g.magnitude.push_back(std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]));
    g.weight.push_back(w);
  }
  return g;
}

ConvergedSum converge(
    const Model& m, const GridSpec& spec, const Oscillation& osc,
    const std::function<std::vector<double>(const MomentumGrid&)>& eval) {
  ConvergedSum out;
  out.grid = make_grid(m, spec, osc, 0);
  out.values = eval(out.grid);
  if (spec.mode == GridMode::kFinite) return out;

  for (int level = 1; level <= spec.max_refinements; ++level) {
    MomentumGrid grid = make_grid(m, spec, osc, level);
    std::vector<double> values = eval(grid);
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      scale = std::max(scale, std::abs(values[i]));
      diff = std::max(diff, std::abs(values[i] - out.values[i]));
    }
    out.residual = scale > 0.0 ? diff / scale : diff;
    out.values = std::move(values);
    out.grid = std::move(grid);
    if (out.residual <= spec.tolerance) return out;
  }
  std::ostringstream os;
  os << "momentum quadrature did not converge: relative change "
     << out.residual << " > tolerance " << spec.tolerance << " after "
     << spec.max_refinements << " refinements";
  throw AccuracyError(os.str(), out.residual);
}

}  // namespace becimp
