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

#include "becimp/qme_transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "becimp/error.hpp"

namespace becimp {

namespace {

using Complex = std::complex<double>;

// Time rows filled per GEMM block.
constexpr int kTimeBlock = 64;

void check_time(double t) {
  if (t < 0.0) throw Error(ErrorCode::kDomain, "time must be >= 0");
}

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace

double dissipative_kernel(const Model& m, double offset_sites, double t,
                          double temperature_nk, const GridSpec& spec) {
  check_time(t);
  if (t == 0.0 || m.kappa == 0.0) return 0.0;
  const double dr = offset_sites * m.spacing;
  const double kt = m.thermal_energy(temperature_nk);
  auto eval = [&](const MomentumGrid& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = g.magnitude[i];
      const double w = dispersion(m, q).phonon_energy;
      sum += g.weight[i] * coupling_weight(m, q) * t * sinc(w * t) *
             thermal_factor(w, kt) * g.separation_factor(i, dr);
    }
    return std::vector<double>{sum};
  };
  return converge(m, spec, Oscillation{std::abs(dr), t}, eval).values[0];
}

double coherent_kernel(const Model& m, double offset_sites, double t,
                       const GridSpec& spec) {
  check_time(t);
  if (t == 0.0 || m.kappa == 0.0) return 0.0;
  const double dr = offset_sites * m.spacing;
  auto eval = [&](const MomentumGrid& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = g.magnitude[i];
      const double w = dispersion(m, q).phonon_energy;
      sum += g.weight[i] * coupling_weight(m, q) * 2.0 *
             g.separation_factor(i, dr) * w * t * t * one_minus_cos_over_sq(w * t);
    }
    return std::vector<double>{sum};
  };
  return converge(m, spec, Oscillation{std::abs(dr), t}, eval).values[0];
}

KernelCache dissipative_kernel_cache(const Model& m, int offsets, double step,
                                     int count, double temperature_nk,
                                     const GridSpec& spec) {
  if (offsets < 1 || count < 1 || !(step > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "kernel cache needs offsets, count >= 1 and step > 0");
  }
  const double kt = m.thermal_energy(temperature_nk);
  const double t_last = step * (count - 1);
  const double max_dr = (offsets - 1) * m.spacing;

  // Per-node coefficient w_n d_n (2N+1) / omega_n, unit coupling.
  auto coefficients = [&](const MomentumGrid& g, Eigen::VectorXd& omega,
                          Eigen::VectorXd& coef) {
    omega.resize(g.size());
    coef.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = g.magnitude[i];
      const double w = dispersion(m, q).phonon_energy;
      omega(i) = w;
      coef(i) = g.weight[i] * coupling_weight(m, q, 1.0) * thermal_factor(w, kt) / w;
    }
  };

  // Converge the node set on the latest and a middle time for every offset.
  const std::vector<double> probe_times = {t_last, 0.5 * t_last, 0.25 * t_last};
  auto probe = [&](const MomentumGrid& g) {
    Eigen::VectorXd omega, coef;
    coefficients(g, omega, coef);
    std::vector<double> out;
    for (double t : probe_times) {
      for (int d = 0; d < offsets; ++d) {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          sum += coef(i) * std::sin(omega(i) * t) * g.separation_factor(i, d * m.spacing);
        }
        out.push_back(sum);
      }
    }
    return out;
  };
  const ConvergedSum converged = converge(m, spec, Oscillation{max_dr, t_last}, probe);
  const MomentumGrid& g = converged.grid;

  Eigen::VectorXd omega, coef;
  coefficients(g, omega, coef);
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd spatial(n, offsets);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int d = 0; d < offsets; ++d) {
      spatial(i, d) = coef(i) * g.separation_factor(i, d * m.spacing);
    }
  }

  KernelCache cache;
  cache.step = step;
  cache.offsets = offsets;
  cache.times = count;
  cache.temperature_nk = temperature_nk;
  cache.residual = converged.residual;
  cache.nodes = g.size();
  cache.values.resize(count, offsets);

  const Eigen::ArrayXd rot_c = (omega * step).array().cos();
  const Eigen::ArrayXd rot_s = (omega * step).array().sin();
  Eigen::MatrixXd phases(n, kTimeBlock);
  for (int k0 = 0; k0 < count; k0 += kTimeBlock) {
    const int rows = std::min(kTimeBlock, count - k0);
    const double t0 = step * k0;
    Eigen::ArrayXd s = (omega * t0).array().sin();
    Eigen::ArrayXd c = (omega * t0).array().cos();
    for (int r = 0; r < rows; ++r) {
      phases.col(r) = s.matrix();
      const Eigen::ArrayXd s_next = s * rot_c + c * rot_s;
      c = c * rot_c - s * rot_s;
      s = s_next;
    }
    cache.values.middleRows(k0, rows).noalias() =
        phases.leftCols(rows).transpose() * spatial;
  }
  return cache;
}

double default_time_step(const Model& m) {
  double dt = 0.01 * m.healing_length / m.sound_speed;
  if (m.hopping > 0.0) dt = std::min(dt, 0.005 / m.hopping);
  if (m.stark != 0.0) dt = std::min(dt, 0.005 / std::abs(m.stark));
  return dt;
}

DensityMatrix localized_state(int sites, int site) {
  if (site < 0 || site >= sites) {
    throw Error(ErrorCode::kInvalidParameter, "initial site outside the lattice");
  }
  DensityMatrix rho = DensityMatrix::Zero(sites, sites);
  rho(site, site) = 1.0;
  return rho;
}

namespace {

Trajectory run_fixed_step(const Model& m, const DensityMatrix& rho0,
                          const EvolveOptions& opt, long long steps,
                          const KernelCache* cache, int origin) {
  const int sites = static_cast<int>(rho0.rows());
  const double dt = opt.t_end / static_cast<double>(steps);
  const bool bath = opt.dissipative && m.kappa != 0.0 && cache != nullptr;
  const double k2 = m.kappa * m.kappa;
  const double hop = m.hopping;

  Eigen::VectorXd onsite(sites);
  for (int j = 0; j < sites; ++j) onsite(j) = m.stark * (j - origin);

  std::vector<double> rate(sites, 0.0);
  auto load_rates = [&](int time_index) {
    if (!bath) return;
    const double k0 = cache->at(time_index, 0);
    for (int d = 0; d < sites; ++d) rate[d] = 2.0 * k2 * (k0 - cache->at(time_index, d));
  };

  auto derivative = [&](const DensityMatrix& r, DensityMatrix& out) {
    for (int b = 0; b < sites; ++b) {
      for (int a = 0; a < sites; ++a) {
        Complex hr = onsite(a) * r(a, b);
        Complex rh = onsite(b) * r(a, b);
        if (hop != 0.0) {
          Complex nb_row = 0.0;
          Complex nb_col = 0.0;
          if (a > 0) nb_row += r(a - 1, b);
          if (a + 1 < sites) nb_row += r(a + 1, b);
          if (b > 0) nb_col += r(a, b - 1);
          if (b + 1 < sites) nb_col += r(a, b + 1);
          hr -= hop * nb_row;
          rh -= hop * nb_col;
        }
        Complex v = Complex(0.0, -1.0) * (hr - rh);
        if (bath) v -= rate[std::abs(a - b)] * r(a, b);
        out(a, b) = v;
      }
    }
  };

  Trajectory tr;
  tr.dt = dt;
  tr.steps = steps;
  tr.min_eigenvalue = 0.0;
  const int samples = std::max(opt.samples, 2);
  std::vector<long long> sample_steps(samples);
  for (int k = 0; k < samples; ++k) {
    sample_steps[k] = static_cast<long long>(
        std::llround(static_cast<double>(k) * steps / (samples - 1)));
  }
  std::size_t next_sample = 0;

  DensityMatrix rho = rho0;
  DensityMatrix k1(sites, sites), k2m(sites, sites), k3(sites, sites),
      k4(sites, sites), tmp(sites, sites);

  auto record = [&](long long step) {
    while (next_sample < sample_steps.size() && sample_steps[next_sample] == step) {
      tr.times.push_back(dt * step);
      tr.states.push_back(rho);
      ++next_sample;
    }
  };
  auto audit = [&](long long step) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    tr.max_hermiticity_error = std::max(tr.max_hermiticity_error, herm);
    const DensityMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    tr.min_eigenvalue = std::min(tr.min_eigenvalue, lo);
    if (lo < -opt.positivity_tolerance) {
      std::ostringstream os;
      os << "density matrix lost positivity at t = " << dt * step
         << " (smallest eigenvalue " << lo << ")";
      throw Error(ErrorCode::kIntegration, os.str());
    }
  };

  record(0);
  const Complex trace0 = rho.trace();
  for (long long n = 0; n < steps; ++n) {
    const int base = static_cast<int>(2 * n);
    if (bath) {
      const double k0 = cache->at(base, 0);
      for (int d = 1; d < sites; ++d) {
        if (cache->at(base, d) > k0) ++tr.negative_rate_events;
      }
    }
    load_rates(base);
    derivative(rho, k1);
    load_rates(base + 1);
    tmp = rho + (0.5 * dt) * k1;
    derivative(tmp, k2m);
    tmp = rho + (0.5 * dt) * k2m;
    derivative(tmp, k3);
    load_rates(base + 2);
    tmp = rho + dt * k3;
    derivative(tmp, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2m + 2.0 * k3 + k4);

    const double drift = std::abs(rho.trace() - trace0);
    tr.max_trace_drift = std::max(tr.max_trace_drift, drift);
    if (drift > opt.trace_tolerance) {
      std::ostringstream os;
      os << "trace drift " << drift << " at t = " << dt * (n + 1) << " with dt = " << dt;
      throw IntegrationFailure(ErrorCode::kIntegration, os.str());
    }
    if (opt.positivity_interval > 0 && (n + 1) % opt.positivity_interval == 0) {
      audit(n + 1);
    }
    record(n + 1);
  }
  audit(steps);
  if (tr.negative_rate_events > 0) {
    std::ostringstream os;
    os << tr.negative_rate_events
       << " (time, offset) points with a transiently negative dephasing rate";
    tr.notes.push_back(os.str());
  }
  return tr;
}

}  // namespace

Trajectory evolve(const Model& m, const DensityMatrix& rho0,
                  const EvolveOptions& opt, const GridSpec& spec,
                  const KernelCache* cache, int origin_site) {
  const int sites = static_cast<int>(rho0.rows());
  if (rho0.cols() != sites || sites < 1) {
    throw Error(ErrorCode::kState, "density matrix must be square");
  }
  if (opt.sites > 0 && opt.sites != sites) {
    throw Error(ErrorCode::kState, "density matrix size differs from the lattice size");
  }
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(rho0.trace() - 1.0) > 1e-10) {
    throw Error(ErrorCode::kState, "initial state must be Hermitian with unit trace");
  }
  if (!(opt.t_end > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "t_end must be positive");
  }
  double dt = opt.dt > 0.0 ? opt.dt : default_time_step(m);
  const bool bath = opt.dissipative && m.kappa != 0.0;

  for (int attempt = 0; attempt <= opt.max_halvings; ++attempt) {
    const long long steps =
        std::max<long long>(1, static_cast<long long>(std::ceil(opt.t_end / dt - 1e-9)));
    const double step_dt = opt.t_end / static_cast<double>(steps);
    KernelCache local;
    const KernelCache* use = nullptr;
    if (bath) {
      const bool reusable = cache != nullptr && cache->offsets >= sites &&
                            cache->times >= 2 * steps + 1 &&
                            std::abs(cache->step - 0.5 * step_dt) <= 1e-12 * step_dt &&
                            cache->temperature_nk == opt.temperature_nk;
      if (reusable) {
        use = cache;
      } else {
        local = dissipative_kernel_cache(m, sites, 0.5 * step_dt,
                                         static_cast<int>(2 * steps + 1),
                                         opt.temperature_nk, spec);
        use = &local;
      }
    }
    try {
      return run_fixed_step(m, rho0, opt, steps, use, origin_site);
    } catch (const IntegrationFailure& e) {
      if (attempt == opt.max_halvings) {
        throw Error(ErrorCode::kIntegration, e.what());
      }
      dt = 0.5 * step_dt;
    }
  }
  throw Error(ErrorCode::kIntegration, "integration failed");
}

double mean_position(const DensityMatrix& rho) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < rho.rows(); ++j) s += j * rho(j, j).real();
  return s;
}

double spread(const DensityMatrix& rho, int origin) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < rho.rows(); ++j) {
    const double d = static_cast<double>(j - origin);
    s += rho(j, j).real() * d * d;
  }
  return std::sqrt(std::max(s, 0.0));
}

TransportStats transport_stats(const DensityMatrix& rho, int origin) {
  TransportStats st;
  st.sigma = spread(rho, origin);
  if (!(st.sigma > 1e-12)) return st;
  st.defined = true;
  const int n = static_cast<int>(rho.rows());
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(j - origin) <= st.sigma) sum += rho(j, j).real();
  }
  st.mean_density = sum / (2.0 * st.sigma);
  double dev = 0.0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(j - origin) <= st.sigma) {
      const double d = rho(j, j).real() - st.mean_density;
      dev += d * d;
    }
  }
  st.density_spread = dev / (2.0 * st.sigma);
  return st;
}

}  // namespace becimp
