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

#include "becimp/becimp.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "becimp/clustering.hpp"
#include "becimp/config.hpp"
#include "becimp/dephasing.hpp"
#include "becimp/error.hpp"
#include "becimp/interaction.hpp"
#include "becimp/params.hpp"
#include "becimp/qme_transport.hpp"
#include "becimp/qubitgate.hpp"

struct bim_config {
  becimp::Config config;
};

struct bim_model {
  becimp::Config config;
  becimp::Model model;
  becimp::GridSpec spec;
};

struct bim_trajectory {
  becimp::Trajectory trajectory;
  int start_site = 0;
  double time_unit_s = 0.0;
};

namespace {

thread_local std::string last_error;

bim_status fail(bim_status s, const std::string& message) {
  last_error = message;
  return s;
}

bim_status from_code(becimp::ErrorCode code) {
  switch (code) {
    case becimp::ErrorCode::kInvalidParameter: return BIM_ERR_INVALID_PARAMETER;
    case becimp::ErrorCode::kDomain: return BIM_ERR_DOMAIN;
    case becimp::ErrorCode::kConfig: return BIM_ERR_CONFIG;
    case becimp::ErrorCode::kAccuracy: return BIM_ERR_ACCURACY;
    case becimp::ErrorCode::kState: return BIM_ERR_STATE;
    case becimp::ErrorCode::kDecompositionUnavailable:
      return BIM_ERR_DECOMPOSITION_UNAVAILABLE;
    case becimp::ErrorCode::kIntegration: return BIM_ERR_INTEGRATION;
    case becimp::ErrorCode::kUnsupportedDimension:
      return BIM_ERR_UNSUPPORTED_DIMENSION;
    case becimp::ErrorCode::kIo: return BIM_ERR_IO;
  }
  return BIM_ERR_INTERNAL;
}

// Runs f, mapping exceptions to status codes.
template <typename F>
bim_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return BIM_OK;
  } catch (const becimp::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BIM_ERR_INTERNAL, e.what());
  }
}

#define BIM_REQUIRE(ptr)                                                 \
  do {                                                                   \
    if ((ptr) == nullptr) return fail(BIM_ERR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

double ms_to_time(const becimp::Model& m, double t_ms) {
  return m.from_seconds(t_ms * 1e-3);
}

becimp::GammaTriple to_triple(bim_gamma_triple g) {
  becimp::GammaTriple t;
  t.gamma0 = g.gamma0;
  t.gamma_minus = g.gamma_minus;
  t.gamma_plus = g.gamma_plus;
  return t;
}

bim_gamma_triple from_triple(const becimp::GammaTriple& g) {
  return {g.gamma0, g.gamma_minus, g.gamma_plus};
}

becimp::Matrix4 to_matrix(const double* re, const double* im) {
  becimp::Matrix4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m(r, c) = {re[4 * r + c], im == nullptr ? 0.0 : im[4 * r + c]};
    }
  }
  return m;
}

void from_matrix(const becimp::Matrix4& m, double* re, double* im) {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      re[4 * r + c] = m(r, c).real();
      im[4 * r + c] = m(r, c).imag();
    }
  }
}

bim_status copy_string(const std::string& s, char* buf, size_t capacity,
                       size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf == nullptr || capacity < s.size() + 1) {
    if (buf == nullptr && needed != nullptr) return BIM_OK;
    return fail(BIM_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return BIM_OK;
}

const becimp::DensityMatrix* state_at(const bim_trajectory* t, size_t sample) {
  if (sample >= t->trajectory.states.size()) return nullptr;
  return &t->trajectory.states[sample];
}

}  // namespace

extern "C" {

const char* bim_version(void) { return BECIMP_VERSION; }

const char* bim_status_name(bim_status status) {
  switch (status) {
    case BIM_OK: return "ok";
    case BIM_ERR_INVALID_PARAMETER: return "invalid_parameter";
    case BIM_ERR_DOMAIN: return "domain";
    case BIM_ERR_CONFIG: return "config";
    case BIM_ERR_ACCURACY: return "accuracy";
    case BIM_ERR_STATE: return "state";
    case BIM_ERR_DECOMPOSITION_UNAVAILABLE: return "decomposition_unavailable";
    case BIM_ERR_INTEGRATION: return "integration";
    case BIM_ERR_UNSUPPORTED_DIMENSION: return "unsupported_dimension";
    case BIM_ERR_IO: return "io";
    case BIM_ERR_NULL_ARGUMENT: return "null_argument";
    case BIM_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case BIM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* bim_last_error(void) { return last_error.c_str(); }

// ---- configuration -------------------------------------------------------

bim_status bim_config_create(const char* preset, bim_config** out) {
  BIM_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto c = std::make_unique<bim_config>();
    c->config = preset == nullptr ? becimp::Config() : becimp::Config::preset(preset);
    *out = c.release();
  });
}

bim_status bim_config_parse(const char* text, bim_config** out) {
  BIM_REQUIRE(text);
  BIM_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto c = std::make_unique<bim_config>();
    c->config = becimp::Config::parse(text);
    *out = c.release();
  });
}

bim_status bim_config_load(const char* path, bim_config** out) {
  BIM_REQUIRE(path);
  BIM_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto c = std::make_unique<bim_config>();
    c->config = becimp::Config::load(path);
    *out = c.release();
  });
}

bim_status bim_config_clone(const bim_config* config, bim_config** out) {
  BIM_REQUIRE(config);
  BIM_REQUIRE(out);
  return guard([&] { *out = new bim_config(*config); });
}

void bim_config_destroy(bim_config* config) { delete config; }

bim_status bim_config_set(bim_config* config, const char* key, const char* value) {
  BIM_REQUIRE(config);
  BIM_REQUIRE(key);
  BIM_REQUIRE(value);
  return guard([&] {
    if (std::string(key) == "preset") {
      config->config.apply(std::string(key) + "=" + value);
    } else {
      config->config.set(key, value);
    }
  });
}

bim_status bim_config_get(const bim_config* config, const char* key, char* buf,
                          size_t capacity, size_t* needed) {
  BIM_REQUIRE(config);
  BIM_REQUIRE(key);
  std::string value;
  const bim_status s = guard([&] { value = config->config.get(key); });
  if (s != BIM_OK) return s;
  return copy_string(value, buf, capacity, needed);
}

size_t bim_config_key_count(void) { return becimp::Config::known_keys().size(); }

const char* bim_config_key_name(size_t index) {
  const auto& keys = becimp::Config::known_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

size_t bim_preset_count(void) { return becimp::Config::preset_names().size(); }

const char* bim_preset_name(size_t index) {
  const auto& names = becimp::Config::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

// ---- model ---------------------------------------------------------------

bim_status bim_model_create(const bim_config* config, bim_model** out) {
  BIM_REQUIRE(config);
  BIM_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto m = std::make_unique<bim_model>();
    m->config = config->config;
    m->model = becimp::build_model(config->config);
    m->spec = becimp::build_grid_spec(config->config);
    *out = m.release();
  });
}

void bim_model_destroy(bim_model* model) { delete model; }

bim_status bim_model_derived(const bim_model* model, bim_derived* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  const becimp::Model& m = model->model;
  out->dimension = m.dimension;
  out->healing_length_m = m.derived.healing_length_m;
  out->sound_speed_m_s = m.derived.sound_speed_m_s;
  out->oscillator_length_m = m.derived.oscillator_length_m;
  out->recoil_energy_j = m.derived.recoil_energy_j;
  out->site_spacing_m = m.derived.site_spacing_m;
  out->time_unit_s = m.time_unit_s;
  out->energy_per_nk = m.kelvin_per_nk_energy;
  out->gn0 = m.gn0;
  out->healing_length = m.healing_length;
  out->oscillator_length = m.x0;
  out->kappa = m.kappa;
  out->hopping = m.hopping;
  out->stark = m.stark;
  out->temperature_nk = m.temperature_nk;
  return BIM_OK;
}

bim_status bim_model_warnings(const bim_model* model, double threshold,
                              bim_warning* out, size_t capacity, size_t* count) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(count);
  return guard([&] {
    const auto w = becimp::validate_regime(model->model, std::nullopt, threshold);
    *count = w.size();
    for (size_t i = 0; i < w.size() && i < capacity && out != nullptr; ++i) {
      std::memset(out[i].condition, 0, sizeof(out[i].condition));
      std::strncpy(out[i].condition, w[i].condition.c_str(),
                   sizeof(out[i].condition) - 1);
      out[i].ratio = w[i].ratio;
      out[i].threshold = w[i].threshold;
    }
  });
}

bim_status bim_thermal_occupation(double energy_j, double temperature_k,
                                  double* out) {
  BIM_REQUIRE(out);
  return guard([&] { *out = becimp::thermal_occupation(energy_j, temperature_k); });
}

// ---- mediated interaction ------------------------------------------------

bim_status bim_mediated_potential(const bim_model* model, double separation_sites,
                                  double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] {
    *out = becimp::mediated_potential(model->model, separation_sites, model->spec);
  });
}

bim_status bim_mediated_potentials(const bim_model* model,
                                   const double* separations, size_t count,
                                   double* out) {
  BIM_REQUIRE(model);
  if (count == 0) return BIM_OK;
  BIM_REQUIRE(separations);
  BIM_REQUIRE(out);
  return guard([&] {
    const std::vector<double> seps(separations, separations + count);
    const auto v = becimp::mediated_potentials(model->model, seps, model->spec);
    std::copy(v.begin(), v.end(), out);
  });
}

bim_status bim_mediated_potential_3d_closed(const bim_model* model,
                                            double separation_sites, double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] {
    *out = becimp::mediated_potential_3d_closed(model->model, separation_sites);
  });
}

bim_status bim_polaron_energy(const bim_model* model, double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] { *out = becimp::polaron_energy(model->model, model->spec); });
}

bim_status bim_transient_phase(const bim_model* model, double separation_sites,
                               double t_ms, double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] {
    *out = becimp::transient_phase(model->model, separation_sites,
                                   ms_to_time(model->model, t_ms), model->spec);
  });
}

// ---- dephasing -----------------------------------------------------------

bim_status bim_gamma_pair(const bim_model* model, double separation_sites,
                          double t_ms, double temperature_nk, double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] {
    *out = becimp::gamma_pair(model->model, separation_sites,
                              ms_to_time(model->model, t_ms), temperature_nk,
                              model->spec);
  });
}

bim_status bim_gamma_triple_at(const bim_model* model, double separation_sites,
                            double t_ms, double temperature_nk, int long_time,
                            bim_gamma_triple* out) {
  return bim_gamma_triples(model, &separation_sites, 1, t_ms, temperature_nk,
                           long_time, out);
}

bim_status bim_gamma_triples(const bim_model* model, const double* separations,
                             size_t count, double t_ms, double temperature_nk,
                             int long_time, bim_gamma_triple* out) {
  BIM_REQUIRE(model);
  if (count == 0) return BIM_OK;
  BIM_REQUIRE(separations);
  BIM_REQUIRE(out);
  return guard([&] {
    const std::vector<double> seps(separations, separations + count);
    const double t = long_time ? 0.0 : ms_to_time(model->model, t_ms);
    const auto e = becimp::dephasing_exponents(
        model->model, seps, t, temperature_nk, model->spec,
        long_time ? becimp::TimeMode::kLongTime : becimp::TimeMode::kFinite);
    for (size_t i = 0; i < count; ++i) {
      out[i] = from_triple(becimp::triple_from_exponents(e[i]));
    }
  });
}

bim_status bim_gamma_bound_3d(const bim_model* model, double temperature_nk,
                              double* value, int* regime) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(value);
  return guard([&] {
    const auto b = becimp::gamma_bound_3d(model->model, temperature_nk, model->spec);
    *value = b.value;
    if (regime != nullptr) {
      *regime = b.regime == becimp::BoundRegime::kZeroTemperature ? BIM_BOUND_ZERO_T
                : b.regime == becimp::BoundRegime::kHighTemperature
                    ? BIM_BOUND_HIGH_T
                    : BIM_BOUND_NUMERICAL;
    }
  });
}

bim_status bim_gate_dephasing_bound(const bim_model* model, double c, double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] { *out = becimp::gate_dephasing_bound(model->model, c); });
}

// ---- two-qubit channel and gate ------------------------------------------

bim_status bim_apply_dephasing(const double* re, const double* im,
                               bim_gamma_triple gamma, double* out_re,
                               double* out_im) {
  BIM_REQUIRE(re);
  BIM_REQUIRE(out_re);
  BIM_REQUIRE(out_im);
  return guard([&] {
    const auto rho = to_matrix(re, im);
    becimp::validate_state(rho);
    from_matrix(becimp::apply_dephasing(rho, to_triple(gamma)), out_re, out_im);
  });
}

bim_status bim_apply_kraus(const double* re, const double* im,
                           bim_gamma_triple gamma, double* out_re, double* out_im) {
  BIM_REQUIRE(re);
  BIM_REQUIRE(out_re);
  BIM_REQUIRE(out_im);
  return guard([&] {
    const auto rho = to_matrix(re, im);
    becimp::validate_state(rho);
    const auto k = becimp::kraus_set(to_triple(gamma));
    from_matrix(becimp::apply_kraus(k, rho), out_re, out_im);
  });
}

bim_status bim_kraus_weights(bim_gamma_triple gamma, double* weights6) {
  BIM_REQUIRE(weights6);
  return guard([&] {
    const auto k = becimp::kraus_set(to_triple(gamma));
    std::copy(k.weights.begin(), k.weights.end(), weights6);
  });
}

bim_status bim_average_fidelity(bim_gamma_triple gamma, double* out) {
  BIM_REQUIRE(out);
  return guard([&] { *out = becimp::average_fidelity(to_triple(gamma)); });
}

bim_status bim_average_fidelity_from_kraus(bim_gamma_triple gamma, double* out) {
  BIM_REQUIRE(out);
  return guard([&] {
    *out = becimp::average_fidelity_from_kraus(becimp::kraus_set(to_triple(gamma)));
  });
}

bim_status bim_independent_reservoir_fidelity(double gamma0, double* out) {
  BIM_REQUIRE(out);
  return guard([&] { *out = becimp::independent_reservoir_fidelity(gamma0); });
}

bim_status bim_gate_report_run(const bim_model* model, int mode,
                               double separation_sites, double time_ms,
                               bim_gate_report* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  if (mode != BIM_GATE_BOUND && mode != BIM_GATE_QUADRATURE) {
    return fail(BIM_ERR_INVALID_PARAMETER, "unknown gate mode");
  }
  return guard([&] {
    becimp::GateOptions opt;
    opt.mode = mode == BIM_GATE_BOUND ? becimp::GateMode::kBound
                                      : becimp::GateMode::kQuadrature;
    opt.separation_sites = separation_sites;
    opt.time = time_ms > 0.0 ? ms_to_time(model->model, time_ms) : 0.0;
    const auto r = becimp::gate_report(model->model, opt, model->spec);
    out->t_g_ms = r.gate_time_ms;
    out->potential = r.potential;
    out->gamma0 = r.gamma.gamma0;
    out->gamma_minus = r.gamma.gamma_minus;
    out->gamma_plus = r.gamma.gamma_plus;
    out->avg_fidelity = r.avg_fidelity;
    out->independent_reservoir_fidelity = r.independent_reservoir_fidelity;
    out->kraus_available = r.kraus_available ? 1 : 0;
  });
}

bim_status bim_gate_time_ms(const bim_model* model, double v12, double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  return guard([&] {
    *out = model->model.to_seconds(becimp::gate_time(v12)) * 1e3;
  });
}

// ---- lattice-gas Monte Carlo ---------------------------------------------

bim_status bim_mc_options_default(bim_mc_options* out) {
  BIM_REQUIRE(out);
  const becimp::McOptions d;
  out->length = 200;
  out->atoms = 40;
  out->temperature_nk = d.temperature_nk;
  out->steps = d.steps;
  out->equilibration = d.equilibration;
  out->sample_interval = d.sample_interval;
  out->seed = d.seed;
  out->move = BIM_MOVE_GLOBAL;
  out->potential_mode = BIM_POTENTIAL_NN;
  out->pair_counting = BIM_PAIRS_AUTO;
  out->delta_max = 20.0;
  return BIM_OK;
}

bim_status bim_mc_run(const bim_model* model, const bim_mc_options* options,
                      bim_mc_stats* out, double* clusters, double* largest,
                      size_t capacity, char* snapshot, size_t snapshot_capacity) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(options);
  BIM_REQUIRE(out);
  const bim_mc_options& o = *options;
  if (o.move != BIM_MOVE_GLOBAL && o.move != BIM_MOVE_LOCAL) {
    return fail(BIM_ERR_INVALID_PARAMETER, "unknown move kind");
  }
  if (o.potential_mode != BIM_POTENTIAL_NN && o.potential_mode != BIM_POTENTIAL_FULL) {
    return fail(BIM_ERR_INVALID_PARAMETER, "unknown potential mode");
  }
  bool truncated = false;
  const bim_status status = guard([&] {
    const becimp::Model& m = model->model;
    if (m.dimension != 1 && m.dimension != 2) {
      throw becimp::Error(becimp::ErrorCode::kUnsupportedDimension,
                          "lattice gas supports D = 1 and D = 2");
    }
    const becimp::Lattice lattice{m.dimension, o.length};
    becimp::PairCounting counting;
    if (o.pair_counting == BIM_PAIRS_ORDERED) {
      counting = becimp::PairCounting::kOrdered;
    } else if (o.pair_counting == BIM_PAIRS_UNORDERED) {
      counting = becimp::PairCounting::kUnordered;
    } else {
      counting = m.dimension == 1 ? becimp::PairCounting::kOrdered
                                  : becimp::PairCounting::kUnordered;
    }
    const becimp::PairPotential pot =
        o.potential_mode == BIM_POTENTIAL_FULL
            ? becimp::PairPotential::from_model(m, lattice, o.delta_max, counting,
                                                model->spec)
            : becimp::PairPotential::nearest_neighbour(
                  lattice, becimp::mediated_potential(m, 1.0, model->spec),
                  counting);
    becimp::McOptions mo;
    mo.temperature_nk = o.temperature_nk;
    mo.steps = o.steps;
    mo.equilibration = o.equilibration;
    mo.sample_interval = o.sample_interval;
    mo.seed = o.seed;
    mo.move = o.move == BIM_MOVE_GLOBAL ? becimp::MoveKind::kGlobal
                                        : becimp::MoveKind::kLocalHop;
    const auto init = becimp::random_configuration(lattice, o.atoms, o.seed);
    const auto st = becimp::metropolis_run(pot, init, mo, m.kelvin_per_nk_energy);
    out->samples = static_cast<long long>(st.samples);
    out->mean_clusters = st.mean_clusters;
    out->std_clusters = st.std_clusters;
    out->mean_largest = st.mean_largest;
    out->std_largest = st.std_largest;
    out->mean_energy = st.mean_energy;
    out->std_energy = st.std_energy;
    out->acceptance = st.acceptance;
    out->max_audit_error = st.max_audit_error;
    out->bond_energy = pot.bond_energy();
    const size_t n = std::min(capacity, st.cluster_series.size());
    if (clusters != nullptr) std::copy_n(st.cluster_series.begin(), n, clusters);
    if (largest != nullptr) std::copy_n(st.largest_series.begin(), n, largest);
    if (snapshot != nullptr && snapshot_capacity > 0) {
      std::string text;
      const int row = lattice.length;
      const auto& occ = st.final_configuration.occupation;
      for (size_t i = 0; i < occ.size(); ++i) {
        text += occ[i] ? '1' : '0';
        if ((i + 1) % static_cast<size_t>(row) == 0) text += '\n';
      }
      const size_t k = std::min(snapshot_capacity - 1, text.size());
      std::memcpy(snapshot, text.data(), k);
      snapshot[k] = '\0';
      truncated = k < text.size();
    }
  });
  if (status == BIM_OK && truncated) {
    return fail(BIM_ERR_BUFFER_TOO_SMALL, "snapshot buffer too small");
  }
  return status;
}

bim_status bim_model_thermal_energy(const bim_model* model, double temperature_nk,
                                    double* out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(out);
  *out = model->model.thermal_energy(temperature_nk);
  return BIM_OK;
}

bim_status bim_analytic_cluster_number_1d(int sites, int atoms, double bond,
                                          double thermal, double* out) {
  BIM_REQUIRE(out);
  return guard([&] {
    *out = becimp::analytic_cluster_number_1d(sites, atoms, bond, thermal);
  });
}

bim_status bim_analytic_island_size_2d(double filling, double bond, double thermal,
                                       double* out) {
  BIM_REQUIRE(out);
  return guard([&] { *out = becimp::analytic_island_size_2d(filling, bond, thermal); });
}

bim_status bim_transition_temperature(double bond, double reduced, double* thermal) {
  BIM_REQUIRE(thermal);
  return guard([&] { *thermal = becimp::transition_temperature(bond, reduced); });
}

// ---- transport -----------------------------------------------------------

bim_status bim_transport_options_default(bim_transport_options* out) {
  BIM_REQUIRE(out);
  out->sites = 0;
  out->start_site = -1;
  out->t_end_ms = 8.2;
  out->samples = 83;
  out->dt_ms = 0.0;
  out->dissipative = 1;
  out->positivity_tolerance = 1e-6;
  return BIM_OK;
}

bim_status bim_transport_run(const bim_model* model,
                             const bim_transport_options* options,
                             const double* kappas, size_t count,
                             bim_trajectory** out) {
  BIM_REQUIRE(model);
  BIM_REQUIRE(options);
  if (count == 0) return BIM_OK;
  BIM_REQUIRE(kappas);
  BIM_REQUIRE(out);
  for (size_t i = 0; i < count; ++i) out[i] = nullptr;
  std::vector<std::unique_ptr<bim_trajectory>> made;
  const bim_status s = guard([&] {
    const becimp::Model& base = model->model;
    if (!(options->t_end_ms > 0.0)) {
      throw becimp::Error(becimp::ErrorCode::kInvalidParameter,
                          "t_end must be positive");
    }
    const double t_end = ms_to_time(base, options->t_end_ms);
    int sites = options->sites;
    if (sites <= 0) {
      // Hard wall beyond the ballistic front 4 J t on either side, or the
      // Wannier-Stark amplitude 4 J / K when that is smaller.
      double reach = 4.0 * std::abs(base.hopping) * t_end;
      if (base.stark != 0.0) {
        reach = std::min(reach, 4.0 * std::abs(base.hopping) / std::abs(base.stark));
      }
      sites = 2 * (static_cast<int>(std::ceil(reach)) + 6) + 1;
    }
    const int start = options->start_site >= 0 ? options->start_site : sites / 2;
    if (start >= sites) {
      throw becimp::Error(becimp::ErrorCode::kInvalidParameter,
                          "start site outside the lattice");
    }
    becimp::EvolveOptions eo;
    eo.sites = sites;
    eo.t_end = t_end;
    eo.samples = options->samples;
    eo.dt = options->dt_ms > 0.0 ? ms_to_time(base, options->dt_ms) : 0.0;
    eo.temperature_nk = base.temperature_nk;
    eo.dissipative = options->dissipative != 0;
    eo.positivity_tolerance = options->positivity_tolerance;
    const auto rho0 = becimp::localized_state(sites, start);

    // The bath kernel scales as kappa^2; one unit-coupling cache serves
    // every run with the same step.
    becimp::KernelCache cache;
    bool have_cache = false;
    for (size_t i = 0; i < count; ++i) {
      const becimp::Model m = becimp::with_kappa(base, kappas[i]);
      const bool bath = eo.dissipative && m.kappa != 0.0;
      if (bath && !have_cache) {
        const double dt = eo.dt > 0.0 ? eo.dt : becimp::default_time_step(m);
        const long long steps = std::max<long long>(
            1, static_cast<long long>(std::ceil(t_end / dt - 1e-9)));
        const double step_dt = t_end / static_cast<double>(steps);
        cache = becimp::dissipative_kernel_cache(m, sites, 0.5 * step_dt,
                                                 static_cast<int>(2 * steps + 1),
                                                 eo.temperature_nk, model->spec);
        have_cache = true;
      }
      auto t = std::make_unique<bim_trajectory>();
      t->trajectory = becimp::evolve(m, rho0, eo, model->spec,
                                     have_cache ? &cache : nullptr, start);
      t->start_site = start;
      t->time_unit_s = base.time_unit_s;
      made.push_back(std::move(t));
    }
  });
  if (s != BIM_OK) return s;
  for (size_t i = 0; i < count; ++i) out[i] = made[i].release();
  return BIM_OK;
}

void bim_trajectory_destroy(bim_trajectory* trajectory) { delete trajectory; }

int bim_trajectory_sites(const bim_trajectory* trajectory) {
  if (trajectory == nullptr || trajectory->trajectory.states.empty()) return 0;
  return static_cast<int>(trajectory->trajectory.states.front().rows());
}

int bim_trajectory_start_site(const bim_trajectory* trajectory) {
  return trajectory == nullptr ? -1 : trajectory->start_site;
}

size_t bim_trajectory_samples(const bim_trajectory* trajectory) {
  return trajectory == nullptr ? 0 : trajectory->trajectory.states.size();
}

bim_status bim_trajectory_time_ms(const bim_trajectory* trajectory, size_t sample,
                                  double* out) {
  BIM_REQUIRE(trajectory);
  BIM_REQUIRE(out);
  if (sample >= trajectory->trajectory.times.size()) {
    return fail(BIM_ERR_INVALID_PARAMETER, "sample index out of range");
  }
  *out = trajectory->trajectory.times[sample] * trajectory->time_unit_s * 1e3;
  return BIM_OK;
}

bim_status bim_trajectory_populations(const bim_trajectory* trajectory,
                                      size_t sample, double* out) {
  BIM_REQUIRE(trajectory);
  BIM_REQUIRE(out);
  const auto* rho = state_at(trajectory, sample);
  if (rho == nullptr) return fail(BIM_ERR_INVALID_PARAMETER, "sample index out of range");
  for (Eigen::Index j = 0; j < rho->rows(); ++j) out[j] = (*rho)(j, j).real();
  return BIM_OK;
}

bim_status bim_trajectory_element(const bim_trajectory* trajectory, size_t sample,
                                  int row, int col, double* re, double* im) {
  BIM_REQUIRE(trajectory);
  BIM_REQUIRE(re);
  BIM_REQUIRE(im);
  const auto* rho = state_at(trajectory, sample);
  if (rho == nullptr) return fail(BIM_ERR_INVALID_PARAMETER, "sample index out of range");
  if (row < 0 || col < 0 || row >= rho->rows() || col >= rho->cols()) {
    return fail(BIM_ERR_INVALID_PARAMETER, "matrix index out of range");
  }
  *re = (*rho)(row, col).real();
  *im = (*rho)(row, col).imag();
  return BIM_OK;
}

bim_status bim_trajectory_stats(const bim_trajectory* trajectory, size_t sample,
                                bim_transport_stats* out) {
  BIM_REQUIRE(trajectory);
  BIM_REQUIRE(out);
  const auto* rho = state_at(trajectory, sample);
  if (rho == nullptr) return fail(BIM_ERR_INVALID_PARAMETER, "sample index out of range");
  const auto st = becimp::transport_stats(*rho, trajectory->start_site);
  out->defined = st.defined ? 1 : 0;
  out->sigma = st.sigma;
  out->mean_density = st.mean_density;
  out->density_spread = st.density_spread;
  out->mean_position = becimp::mean_position(*rho);
  return BIM_OK;
}

bim_status bim_trajectory_diagnostics_get(const bim_trajectory* trajectory,
                                          bim_trajectory_diagnostics* out) {
  BIM_REQUIRE(trajectory);
  BIM_REQUIRE(out);
  const auto& t = trajectory->trajectory;
  out->dt_ms = t.dt * trajectory->time_unit_s * 1e3;
  out->steps = t.steps;
  out->max_trace_drift = t.max_trace_drift;
  out->max_hermiticity_error = t.max_hermiticity_error;
  out->min_eigenvalue = t.min_eigenvalue;
  out->negative_rate_events = t.negative_rate_events;
  return BIM_OK;
}

}  // extern "C"
