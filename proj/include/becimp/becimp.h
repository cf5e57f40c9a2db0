/* Copyright 2026 The becimp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the impurity/condensate simulation library.
 *
 * Conventions:
 *   - Every fallible call returns bim_status; BIM_OK is 0. On failure the
 *     message is available from bim_last_error() on the calling thread.
 *   - Energies are in recoil units E_R, separations in lattice sites, times
 *     in milliseconds, temperatures in nK unless a name says otherwise.
 *   - Handles are opaque; every create or run call has a matching destroy.
 *   - Handles are immutable after creation and may be shared across threads.
 *   - 4x4 matrices are row-major arrays of 16 doubles (separate re/im).
 */

#ifndef BECIMP_BECIMP_H_
#define BECIMP_BECIMP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(BECIMP_BUILDING_LIBRARY)
#define BIM_API __attribute__((visibility("default")))
#else
#define BIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bim_status {
  BIM_OK = 0,
  BIM_ERR_INVALID_PARAMETER = 1,
  BIM_ERR_DOMAIN = 2,
  BIM_ERR_CONFIG = 3,
  BIM_ERR_ACCURACY = 4,
  BIM_ERR_STATE = 5,
  BIM_ERR_DECOMPOSITION_UNAVAILABLE = 6,
  BIM_ERR_INTEGRATION = 7,
  BIM_ERR_UNSUPPORTED_DIMENSION = 8,
  BIM_ERR_IO = 9,
  BIM_ERR_NULL_ARGUMENT = 10,
  BIM_ERR_BUFFER_TOO_SMALL = 11,
  BIM_ERR_INTERNAL = 12
} bim_status;

BIM_API const char* bim_version(void);
BIM_API const char* bim_status_name(bim_status status);
/* Message of the last failed call on this thread ("" if none). */
BIM_API const char* bim_last_error(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct bim_config bim_config;

/* preset: fig2 | fig3 | fig4 | fig5 | fig6 | gate3d (NULL means fig3). */
BIM_API bim_status bim_config_create(const char* preset, bim_config** out);
/* key = value text or a JSON object. */
BIM_API bim_status bim_config_parse(const char* text, bim_config** out);
BIM_API bim_status bim_config_load(const char* path, bim_config** out);
BIM_API bim_status bim_config_clone(const bim_config* config, bim_config** out);
BIM_API void bim_config_destroy(bim_config* config);
BIM_API bim_status bim_config_set(bim_config* config, const char* key,
                                  const char* value);
/* Copies the value with its terminator into buf when it fits; *needed
 * receives the required size including the terminator. */
BIM_API bim_status bim_config_get(const bim_config* config, const char* key,
                                  char* buf, size_t capacity, size_t* needed);
BIM_API size_t bim_config_key_count(void);
BIM_API const char* bim_config_key_name(size_t index);
BIM_API size_t bim_preset_count(void);
BIM_API const char* bim_preset_name(size_t index);

/* ---- model ------------------------------------------------------------ */

typedef struct bim_model bim_model;

BIM_API bim_status bim_model_create(const bim_config* config, bim_model** out);
BIM_API void bim_model_destroy(bim_model* model);

typedef struct bim_derived {
  int dimension;
  double healing_length_m;
  double sound_speed_m_s;
  double oscillator_length_m;
  double recoil_energy_j;
  double site_spacing_m;
  double time_unit_s;       /* hbar / E_R */
  double energy_per_nk;     /* k_B * 1 nK / E_R */
  double gn0;               /* g n0 / E_R */
  double healing_length;    /* xi / lambda */
  double oscillator_length; /* x0 / lambda */
  double kappa;             /* kappa / (E_R lambda^D) */
  double hopping;           /* J / E_R */
  double stark;             /* K / E_R */
  double temperature_nk;
} bim_derived;

BIM_API bim_status bim_model_derived(const bim_model* model, bim_derived* out);

typedef struct bim_warning {
  char condition[32];
  double ratio;
  double threshold;
} bim_warning;

/* Writes up to `capacity` warnings; *count receives the total number. */
BIM_API bim_status bim_model_warnings(const bim_model* model, double threshold,
                                      bim_warning* out, size_t capacity,
                                      size_t* count);

BIM_API bim_status bim_thermal_occupation(double energy_j, double temperature_k,
                                          double* out);

/* ---- mediated interaction --------------------------------------------- */

BIM_API bim_status bim_mediated_potential(const bim_model* model,
                                          double separation_sites, double* out);
/* Values at `count` separations on one shared momentum grid. */
BIM_API bim_status bim_mediated_potentials(const bim_model* model,
                                           const double* separations,
                                           size_t count, double* out);
BIM_API bim_status bim_mediated_potential_3d_closed(const bim_model* model,
                                                    double separation_sites,
                                                    double* out);
BIM_API bim_status bim_polaron_energy(const bim_model* model, double* out);
/* Radians. */
BIM_API bim_status bim_transient_phase(const bim_model* model,
                                       double separation_sites, double t_ms,
                                       double* out);

/* ---- dephasing -------------------------------------------------------- */

typedef struct bim_gamma_triple {
  double gamma0;
  double gamma_minus;
  double gamma_plus;
} bim_gamma_triple;

BIM_API bim_status bim_gamma_pair(const bim_model* model, double separation_sites,
                                  double t_ms, double temperature_nk, double* out);
/* long_time != 0 replaces (1 - cos w t) by 1 and ignores t_ms. */
BIM_API bim_status bim_gamma_triple_at(const bim_model* model,
                                    double separation_sites, double t_ms,
                                    double temperature_nk, int long_time,
                                    bim_gamma_triple* out);
/* Triples for `count` separations sharing one grid. */
BIM_API bim_status bim_gamma_triples(const bim_model* model,
                                     const double* separations, size_t count,
                                     double t_ms, double temperature_nk,
                                     int long_time, bim_gamma_triple* out);

enum { BIM_BOUND_ZERO_T = 0, BIM_BOUND_HIGH_T = 1, BIM_BOUND_NUMERICAL = 2 };
BIM_API bim_status bim_gamma_bound_3d(const bim_model* model,
                                      double temperature_nk, double* value,
                                      int* regime);
BIM_API bim_status bim_gate_dephasing_bound(const bim_model* model, double c,
                                            double* out);

/* ---- two-qubit channel and gate --------------------------------------- */

BIM_API bim_status bim_apply_dephasing(const double* re, const double* im,
                                       bim_gamma_triple gamma, double* out_re,
                                       double* out_im);
BIM_API bim_status bim_apply_kraus(const double* re, const double* im,
                                   bim_gamma_triple gamma, double* out_re,
                                   double* out_im);
/* Squared prefactors of the six operators. */
BIM_API bim_status bim_kraus_weights(bim_gamma_triple gamma, double* weights6);
BIM_API bim_status bim_average_fidelity(bim_gamma_triple gamma, double* out);
BIM_API bim_status bim_average_fidelity_from_kraus(bim_gamma_triple gamma,
                                                   double* out);
BIM_API bim_status bim_independent_reservoir_fidelity(double gamma0, double* out);

enum { BIM_GATE_BOUND = 0, BIM_GATE_QUADRATURE = 1 };

typedef struct bim_gate_report {
  double t_g_ms;
  double potential;
  double gamma0;
  double gamma_minus;
  double gamma_plus;
  double avg_fidelity;
  double independent_reservoir_fidelity;
  int kraus_available;
} bim_gate_report;

/* time_ms <= 0 calibrates the gate time (quadrature mode only). */
BIM_API bim_status bim_gate_report_run(const bim_model* model, int mode,
                                       double separation_sites, double time_ms,
                                       bim_gate_report* out);
BIM_API bim_status bim_gate_time_ms(const bim_model* model, double v12,
                                    double* out);

/* ---- lattice-gas Monte Carlo ------------------------------------------ */

enum { BIM_MOVE_GLOBAL = 0, BIM_MOVE_LOCAL = 1 };
enum { BIM_POTENTIAL_NN = 0, BIM_POTENTIAL_FULL = 1 };
enum { BIM_PAIRS_AUTO = -1, BIM_PAIRS_ORDERED = 0, BIM_PAIRS_UNORDERED = 1 };

typedef struct bim_mc_options {
  int length;       /* ring length (D = 1) or torus side (D = 2) */
  int atoms;
  double temperature_nk;
  long long steps;
  long long equilibration;
  long long sample_interval;
  uint64_t seed;
  int move;
  int potential_mode;
  int pair_counting; /* AUTO: ordered in 1D, unordered in 2D */
  double delta_max;
} bim_mc_options;

typedef struct bim_mc_stats {
  long long samples;
  double mean_clusters;
  double std_clusters;
  double mean_largest;
  double std_largest;
  double mean_energy;
  double std_energy;
  double acceptance;
  double max_audit_error;
  double bond_energy; /* pair factor times V12, E_R */
} bim_mc_stats;

BIM_API bim_status bim_mc_options_default(bim_mc_options* out);
/* Runs one chain. When clusters/largest are non-NULL they receive up to
 * `capacity` per-sample values. snapshot (optional) receives the final
 * occupation as 0/1 rows terminated by '\0'; a short buffer receives a
 * truncated snapshot, the statistics are still filled, and the call returns
 * BIM_ERR_BUFFER_TOO_SMALL. */
BIM_API bim_status bim_mc_run(const bim_model* model, const bim_mc_options* options,
                              bim_mc_stats* out, double* clusters,
                              double* largest, size_t capacity, char* snapshot,
                              size_t snapshot_capacity);
BIM_API bim_status bim_model_thermal_energy(const bim_model* model,
                                            double temperature_nk, double* out);
/* bond and thermal in one common unit. */
BIM_API bim_status bim_analytic_cluster_number_1d(int sites, int atoms,
                                                  double bond, double thermal,
                                                  double* out);
BIM_API bim_status bim_analytic_island_size_2d(double filling, double bond,
                                               double thermal, double* out);
BIM_API bim_status bim_transition_temperature(double bond, double reduced,
                                              double* thermal);

/* ---- quantum master equation transport -------------------------------- */

typedef struct bim_transport_options {
  int sites;         /* <= 0: sized from hopping, tilt and t_end */
  int start_site;    /* < 0: centre */
  double t_end_ms;
  int samples;
  double dt_ms;      /* <= 0: default step */
  int dissipative;
  /* Abort when the smallest eigenvalue falls below -tolerance. */
  double positivity_tolerance;
} bim_transport_options;

typedef struct bim_trajectory bim_trajectory;

BIM_API bim_status bim_transport_options_default(bim_transport_options* out);
/* Runs one evolution per coupling in `kappas` (E_R lambda), sharing the bath
 * kernel; out receives `count` handles. */
BIM_API bim_status bim_transport_run(const bim_model* model,
                                     const bim_transport_options* options,
                                     const double* kappas, size_t count,
                                     bim_trajectory** out);
BIM_API void bim_trajectory_destroy(bim_trajectory* trajectory);
BIM_API int bim_trajectory_sites(const bim_trajectory* trajectory);
BIM_API int bim_trajectory_start_site(const bim_trajectory* trajectory);
BIM_API size_t bim_trajectory_samples(const bim_trajectory* trajectory);
BIM_API bim_status bim_trajectory_time_ms(const bim_trajectory* trajectory,
                                          size_t sample, double* out);
BIM_API bim_status bim_trajectory_populations(const bim_trajectory* trajectory,
                                              size_t sample, double* out);
BIM_API bim_status bim_trajectory_element(const bim_trajectory* trajectory,
                                          size_t sample, int row, int col,
                                          double* re, double* im);
typedef struct bim_transport_stats {
  int defined;
  double sigma;
  double mean_density;
  double density_spread;
  double mean_position;
} bim_transport_stats;
BIM_API bim_status bim_trajectory_stats(const bim_trajectory* trajectory,
                                        size_t sample, bim_transport_stats* out);
typedef struct bim_trajectory_diagnostics {
  double dt_ms;
  long long steps;
  double max_trace_drift;
  double max_hermiticity_error;
  double min_eigenvalue;
  long long negative_rate_events;
} bim_trajectory_diagnostics;
BIM_API bim_status bim_trajectory_diagnostics_get(const bim_trajectory* trajectory,
                                                  bim_trajectory_diagnostics* out);

#ifdef __cplusplus
}
#endif

#endif /* BECIMP_BECIMP_H_ */
