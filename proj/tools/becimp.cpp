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

// Command-line driver. Links only the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "becimp/becimp.h"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Carries a library status out of nested helpers.
struct Failure : std::runtime_error {
  bim_status status;
  Failure(bim_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
};

void check(bim_status s) {
  if (s != BIM_OK) {
    throw Failure(s, std::string(bim_status_name(s)) + ": " + bim_last_error());
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// JSON cannot carry non-finite numbers; they become strings.
json jnum(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header)
      : out_(path), path_(path) {
    if (!out_) throw Failure(BIM_ERR_IO, "cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  const fs::path& path() const { return path_; }

 private:
  std::ofstream out_;
  fs::path path_;
};

struct ConfigHandle {
  bim_config* ptr = nullptr;
  ~ConfigHandle() { bim_config_destroy(ptr); }
};

struct ModelHandle {
  bim_model* ptr = nullptr;
  ~ModelHandle() { bim_model_destroy(ptr); }
};

struct TrajectoryHandles {
  std::vector<bim_trajectory*> items;
  ~TrajectoryHandles() {
    for (auto* t : items) bim_trajectory_destroy(t);
  }
};

std::string get(const bim_config* c, const std::string& key) {
  size_t needed = 0;
  check(bim_config_get(c, key.c_str(), nullptr, 0, &needed));
  std::string s(needed, '\0');
  check(bim_config_get(c, key.c_str(), s.data(), s.size(), &needed));
  s.resize(needed - 1);
  return s;
}

double number(const bim_config* c, const std::string& key) {
  const std::string s = get(c, key);
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Failure(BIM_ERR_CONFIG, "config: " + key + " is not a number: '" + s + "'");
  }
}

// Empty string means "unset".
bool has(const bim_config* c, const std::string& key) { return !get(c, key).empty(); }

bool flag(const bim_config* c, const std::string& key) {
  const std::string s = get(c, key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
  throw Failure(BIM_ERR_CONFIG, "config: " + key + " is not a boolean: '" + s + "'");
}

std::vector<double> numbers(const bim_config* c, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(get(c, key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Failure(BIM_ERR_CONFIG, "config: " + key + " has a non-numeric entry '" + item + "'");
    }
  }
  return out;
}

std::vector<double> linspace(double start, double stop, long long points) {
  std::vector<double> out;
  if (points <= 0 || stop < start) return out;
  if (points == 1) return {start};
  for (long long i = 0; i < points; ++i) {
    out.push_back(start + (stop - start) * static_cast<double>(i) /
                              static_cast<double>(points - 1));
  }
  return out;
}

struct Run {
  std::string subcommand;
  fs::path out_dir;
  uint64_t seed = 1;
  int threads = 1;
  bim_config* config = nullptr;
  bim_model* model = nullptr;
  bim_derived derived{};
  std::vector<fs::path> outputs;
  json extra = json::object();
  std::vector<uint64_t> seeds;

  fs::path file(const std::string& name) {
    const fs::path p = out_dir / name;
    outputs.push_back(p);
    return p;
  }
};

// ---- subcommands ---------------------------------------------------------

void run_potential(Run& r) {
  const int max_offset = static_cast<int>(number(r.config, "potential.delta_max"));
  std::vector<double> seps;
  for (int d = 0; d <= max_offset; ++d) seps.push_back(d);
  std::vector<double> v(seps.size());
  if (!seps.empty()) check(bim_mediated_potentials(r.model, seps.data(), seps.size(), v.data()));
  const bool closed = r.derived.dimension == 3;
  std::vector<std::string> header = {"distance_sites", "V_E_R"};
  if (closed) header.push_back("V_yukawa_E_R");
  Csv csv(r.file("potential.csv"), header);
  for (size_t i = 0; i < seps.size(); ++i) {
    std::vector<std::string> row = {fmt(seps[i]), fmt(v[i])};
    if (closed) {
      double y = std::numeric_limits<double>::quiet_NaN();
      if (seps[i] > 0) check(bim_mediated_potential_3d_closed(r.model, seps[i], &y));
      row.push_back(fmt(y));
    }
    csv.row(row);
  }
  if (!v.empty()) r.extra["polaron_energy_E_R"] = jnum(v[0]);
}

void run_dephasing_scan(Run& r) {
  const std::string axis = get(r.config, "scan.axis");
  const bool long_time = flag(r.config, "scan.long_time");
  double t_ms = number(r.config, "scan.time_ms");
  double dist = number(r.config, "scan.distance_sites");
  double temp = r.derived.temperature_nk;
  double start = 0.0, stop = 0.0;
  if (axis == "time") {
    stop = t_ms;
  } else if (axis == "distance") {
    stop = dist;
  } else if (axis == "temperature") {
    stop = std::max(2.0 * temp, 1.0);
  } else {
    throw Failure(BIM_ERR_CONFIG, "scan.axis must be time, distance or temperature");
  }
  if (has(r.config, "scan.start")) start = number(r.config, "scan.start");
  if (has(r.config, "scan.stop")) stop = number(r.config, "scan.stop");
  const auto points = static_cast<long long>(number(r.config, "scan.points"));
  const auto grid = linspace(start, stop, points);

  Csv csv(r.file("dephasing.csv"),
          {"time_ms", "distance_sites", "temperature_nK", "Gamma0", "Gamma_minus",
           "Gamma_plus", "avg_fidelity"});
  auto emit = [&](double t, double d, double T, const bim_gamma_triple& g) {
    double f = 0.0;
    check(bim_average_fidelity(g, &f));
    csv.row({long_time ? "inf" : fmt(t), fmt(d), fmt(T), fmt(g.gamma0),
             fmt(g.gamma_minus), fmt(g.gamma_plus), fmt(f)});
  };
  if (axis == "distance") {
    std::vector<bim_gamma_triple> g(grid.size());
    if (!grid.empty()) {
      check(bim_gamma_triples(r.model, grid.data(), grid.size(), t_ms, temp,
                              long_time ? 1 : 0, g.data()));
    }
    for (size_t i = 0; i < grid.size(); ++i) emit(t_ms, grid[i], temp, g[i]);
    return;
  }
  for (double x : grid) {
    if (axis == "time") t_ms = x;
    if (axis == "temperature") temp = x;
    bim_gamma_triple g{};
    check(bim_gamma_triple_at(r.model, dist, t_ms, temp, long_time ? 1 : 0, &g));
    emit(t_ms, dist, temp, g);
  }
}

void run_gate_fidelity(Run& r) {
  const std::string mode_name = get(r.config, "gate.mode");
  int mode;
  if (mode_name == "bound") {
    mode = BIM_GATE_BOUND;
  } else if (mode_name == "quadrature") {
    mode = BIM_GATE_QUADRATURE;
  } else {
    throw Failure(BIM_ERR_CONFIG, "gate.mode must be bound or quadrature");
  }
  bim_gate_report g{};
  check(bim_gate_report_run(r.model, mode, number(r.config, "gate.separation_sites"),
                            number(r.config, "gate.time_ms"), &g));
  json j = {{"mode", mode_name},
            {"t_g_ms", jnum(g.t_g_ms)},
            {"V12_E_R", jnum(g.potential)},
            {"Gamma0", jnum(g.gamma0)},
            {"Gamma_minus", jnum(g.gamma_minus)},
            {"Gamma_plus", jnum(g.gamma_plus)},
            {"avg_fidelity", jnum(g.avg_fidelity)},
            {"independent_reservoir_fidelity", jnum(g.independent_reservoir_fidelity)},
            {"kraus_available", g.kraus_available != 0}};
  std::ofstream(r.file("gate-fidelity.json")) << j.dump(2) << '\n';
  Csv csv(r.file("gate-fidelity.csv"),
          {"t_g_ms", "V12_E_R", "Gamma0", "Gamma_minus", "Gamma_plus",
           "avg_fidelity", "independent_reservoir_fidelity"});
  csv.row({fmt(g.t_g_ms), fmt(g.potential), fmt(g.gamma0), fmt(g.gamma_minus),
           fmt(g.gamma_plus), fmt(g.avg_fidelity),
           fmt(g.independent_reservoir_fidelity)});
  std::cout << j.dump(2) << '\n';
}

struct McJob {
  double temperature = 0.0;
  uint64_t seed = 0;
  bim_mc_stats stats{};
  std::vector<double> clusters, largest;
  std::string snapshot;
  bim_status status = BIM_OK;
  std::string error;
};

void run_cluster_mc(Run& r) {
  bim_mc_options base{};
  check(bim_mc_options_default(&base));
  base.length = static_cast<int>(number(r.config, "lattice.sites"));
  base.atoms = static_cast<int>(number(r.config, "mc.atoms"));
  base.steps = static_cast<long long>(number(r.config, "mc.steps"));
  base.equilibration = static_cast<long long>(number(r.config, "mc.equilibration"));
  base.sample_interval = static_cast<long long>(number(r.config, "mc.sample_interval"));
  base.delta_max = number(r.config, "mc.delta_max");
  const std::string move = get(r.config, "mc.move");
  if (move == "global") base.move = BIM_MOVE_GLOBAL;
  else if (move == "local") base.move = BIM_MOVE_LOCAL;
  else throw Failure(BIM_ERR_CONFIG, "mc.move must be global or local");
  const std::string pm = get(r.config, "mc.potential_mode");
  if (pm == "nn") base.potential_mode = BIM_POTENTIAL_NN;
  else if (pm == "full") base.potential_mode = BIM_POTENTIAL_FULL;
  else throw Failure(BIM_ERR_CONFIG, "mc.potential_mode must be nn or full");
  const std::string pc = get(r.config, "mc.pair_counting");
  if (pc == "auto") base.pair_counting = BIM_PAIRS_AUTO;
  else if (pc == "ordered") base.pair_counting = BIM_PAIRS_ORDERED;
  else if (pc == "unordered") base.pair_counting = BIM_PAIRS_UNORDERED;
  else throw Failure(BIM_ERR_CONFIG, "mc.pair_counting must be auto, ordered or unordered");
  const bool snapshot = flag(r.config, "mc.snapshot");
  const int n_seeds = static_cast<int>(number(r.config, "mc.seeds"));
  const auto temps = numbers(r.config, "mc.temperatures_nK");
  for (int k = 0; k < n_seeds; ++k) r.seeds.push_back(r.seed + static_cast<uint64_t>(k));

  std::vector<McJob> jobs;
  for (double T : temps) {
    for (uint64_t s : r.seeds) {
      McJob job;
      job.temperature = T;
      job.seed = s;
      jobs.push_back(std::move(job));
    }
  }
  const size_t capacity =
      base.sample_interval > 0 ? static_cast<size_t>(base.steps / base.sample_interval) + 1 : 0;
  const int sites = r.derived.dimension == 1 ? base.length : base.length * base.length;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      McJob& job = jobs[i];
      bim_mc_options o = base;
      o.temperature_nk = job.temperature;
      o.seed = job.seed;
      job.clusters.assign(capacity, 0.0);
      job.largest.assign(capacity, 0.0);
      std::string snap(static_cast<size_t>(sites) + base.length + 2, '\0');
      const bool want = snapshot && job.seed == r.seed;
      job.status = bim_mc_run(r.model, &o, &job.stats, job.clusters.data(),
                              job.largest.data(), capacity,
                              want ? snap.data() : nullptr, want ? snap.size() : 0);
      if (job.status != BIM_OK) {
        job.error = bim_last_error();
        continue;
      }
      job.clusters.resize(static_cast<size_t>(job.stats.samples));
      job.largest.resize(static_cast<size_t>(job.stats.samples));
      if (want) job.snapshot = snap.c_str();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, r.threads); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& job : jobs) {
    if (job.status != BIM_OK) throw Failure(job.status, job.error);
  }

  const double atoms = base.atoms;
  Csv clusters(r.file("clusters.csv"),
               {"temperature_nK", "mean_Nc_over_N", "std_Nc_over_N",
                "stderr_Nc_over_N", "analytic_Nc_over_N"});
  Csv islands(r.file("islands.csv"),
              {"temperature_nK", "mean_NI_over_N", "std_NI_over_N",
               "stderr_NI_over_N", "analytic_NI_over_N"});
  json diagnostics = json::array();
  double bond = 0.0;
  for (size_t ti = 0; ti < temps.size(); ++ti) {
    // Pool samples over seeds; the standard error uses the per-seed means.
    auto pooled = [&](bool largest) {
      double sum = 0.0, sum2 = 0.0, n = 0.0;
      std::vector<double> seed_means;
      for (size_t k = 0; k < r.seeds.size(); ++k) {
        const McJob& job = jobs[ti * r.seeds.size() + k];
        const auto& series = largest ? job.largest : job.clusters;
        double s = 0.0;
        for (double x : series) {
          const double y = x / atoms;
          sum += y;
          sum2 += y * y;
          s += y;
        }
        n += static_cast<double>(series.size());
        if (!series.empty()) seed_means.push_back(s / static_cast<double>(series.size()));
      }
      const double mean = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
      const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
      double se = std::numeric_limits<double>::quiet_NaN();
      if (seed_means.size() > 1) {
        double m = 0.0, v = 0.0;
        for (double x : seed_means) m += x;
        m /= static_cast<double>(seed_means.size());
        for (double x : seed_means) v += (x - m) * (x - m);
        v /= static_cast<double>(seed_means.size() - 1);
        se = std::sqrt(v / static_cast<double>(seed_means.size()));
      }
      return std::array<double, 3>{mean, std::sqrt(var), se};
    };
    const double T = temps[ti];
    const McJob& first = jobs[ti * r.seeds.size()];
    bond = first.stats.bond_energy;
    double thermal = 0.0;
    check(bim_model_thermal_energy(r.model, T, &thermal));
    double a_clusters = std::numeric_limits<double>::quiet_NaN();
    double a_island = std::numeric_limits<double>::quiet_NaN();
    if (r.derived.dimension == 1) {
      check(bim_analytic_cluster_number_1d(sites, base.atoms, bond, thermal, &a_clusters));
    } else {
      check(bim_analytic_island_size_2d(atoms / sites, bond, thermal, &a_island));
    }
    const auto c = pooled(false);
    const auto l = pooled(true);
    clusters.row({fmt(T), fmt(c[0]), fmt(c[1]), fmt(c[2]), fmt(a_clusters)});
    islands.row({fmt(T), fmt(l[0]), fmt(l[1]), fmt(l[2]), fmt(a_island)});
    double acc = 0.0, audit = 0.0;
    for (size_t k = 0; k < r.seeds.size(); ++k) {
      const McJob& job = jobs[ti * r.seeds.size() + k];
      acc += job.stats.acceptance / static_cast<double>(r.seeds.size());
      audit = std::max(audit, job.stats.max_audit_error);
    }
    diagnostics.push_back({{"temperature_nK", T},
                           {"mean_acceptance", jnum(acc)},
                           {"max_audit_error", jnum(audit)}});
    if (snapshot && !first.snapshot.empty()) {
      char tag[32];
      std::snprintf(tag, sizeof(tag), "%.6g", T);
      std::ofstream(r.file(std::string("snapshot_T") + tag + ".txt")) << first.snapshot;
    }
  }
  r.extra["bond_energy_E_R"] = jnum(bond);
  r.extra["step_definition"] = "one proposed single-atom move";
  r.extra["chains"] = diagnostics;
  if (r.derived.dimension == 2) {
    double thermal = 0.0;
    if (bim_transition_temperature(bond, 1.0 - 2.0 * atoms / sites, &thermal) == BIM_OK) {
      r.extra["transition_temperature_nK"] = jnum(thermal / r.derived.energy_per_nk);
    }
  }
}

std::vector<bim_trajectory*> evolve_kappas(Run& r, double t_end_ms,
                                           const std::vector<double>& kappas,
                                           TrajectoryHandles& handles) {
  bim_transport_options o{};
  check(bim_transport_options_default(&o));
  o.sites = static_cast<int>(number(r.config, "lattice.sites"));
  o.start_site = static_cast<int>(number(r.config, "transport.start_site"));
  o.t_end_ms = t_end_ms;
  o.samples = static_cast<int>(number(r.config, "transport.samples"));
  o.positivity_tolerance = number(r.config, "transport.positivity_tolerance");
  handles.items.assign(kappas.size(), nullptr);
  if (!kappas.empty()) {
    check(bim_transport_run(r.model, &o, kappas.data(), kappas.size(),
                            handles.items.data()));
  }
  json diag = json::array();
  for (size_t i = 0; i < kappas.size(); ++i) {
    bim_trajectory_diagnostics d{};
    check(bim_trajectory_diagnostics_get(handles.items[i], &d));
    diag.push_back({{"kappa", kappas[i]},
                    {"sites", bim_trajectory_sites(handles.items[i])},
                    {"dt_ms", jnum(d.dt_ms)},
                    {"steps", d.steps},
                    {"max_trace_drift", jnum(d.max_trace_drift)},
                    {"max_hermiticity_error", jnum(d.max_hermiticity_error)},
                    {"min_eigenvalue", jnum(d.min_eigenvalue)},
                    {"negative_rate_events", d.negative_rate_events}});
  }
  r.extra["trajectories"] = diag;
  return handles.items;
}

void write_density(Csv& csv, double kappa, bim_trajectory* t) {
  const int sites = bim_trajectory_sites(t);
  const int start = bim_trajectory_start_site(t);
  std::vector<double> p(static_cast<size_t>(sites));
  for (size_t k = 0; k < bim_trajectory_samples(t); ++k) {
    double t_ms = 0.0;
    check(bim_trajectory_time_ms(t, k, &t_ms));
    check(bim_trajectory_populations(t, k, p.data()));
    for (int j = 0; j < sites; ++j) {
      csv.row({fmt(kappa), fmt(t_ms), std::to_string(j - start), fmt(p[j])});
    }
  }
}

void run_transport(Run& r) {
  const auto kappas = numbers(r.config, "transport.kappas");
  TrajectoryHandles handles;
  evolve_kappas(r, number(r.config, "transport.t_end_ms"), kappas, handles);
  Csv density(r.file("transport_density.csv"),
              {"kappa_E_R_lambda", "t_ms", "site_offset", "p"});
  Csv series(r.file("transport_stats.csv"),
             {"kappa_E_R_lambda", "t_ms", "sigma_d_sites", "p_bar", "p_d"});
  Csv crossover(r.file("transport_crossover.csv"),
                {"kappa_E_R_lambda", "sigma_d_sites", "p_bar", "p_d"});
  for (size_t i = 0; i < kappas.size(); ++i) {
    bim_trajectory* t = handles.items[i];
    write_density(density, kappas[i], t);
    const size_t n = bim_trajectory_samples(t);
    for (size_t k = 0; k < n; ++k) {
      double t_ms = 0.0;
      bim_transport_stats s{};
      check(bim_trajectory_time_ms(t, k, &t_ms));
      check(bim_trajectory_stats(t, k, &s));
      const double nan = std::numeric_limits<double>::quiet_NaN();
      series.row({fmt(kappas[i]), fmt(t_ms), fmt(s.sigma),
                  fmt(s.defined ? s.mean_density : nan),
                  fmt(s.defined ? s.density_spread : nan)});
      if (k + 1 == n) {
        crossover.row({fmt(kappas[i]), fmt(s.sigma),
                       fmt(s.defined ? s.mean_density : nan),
                       fmt(s.defined ? s.density_spread : nan)});
      }
    }
  }
}

void run_bloch(Run& r) {
  if (r.derived.stark == 0.0) {
    throw Failure(BIM_ERR_CONFIG, "bloch needs a nonzero lattice.K");
  }
  const double period_ms =
      2.0 * std::numbers::pi / std::abs(r.derived.stark) * r.derived.time_unit_s * 1e3;
  const double periods = number(r.config, "transport.periods");
  const auto kappas = numbers(r.config, "transport.kappas");
  TrajectoryHandles handles;
  evolve_kappas(r, periods * period_ms, kappas, handles);
  r.extra["bloch_period_ms"] = jnum(period_ms);
  Csv density(r.file("bloch_density.csv"),
              {"kappa_E_R_lambda", "t_ms", "site_offset", "p"});
  Csv series(r.file("bloch.csv"),
             {"kappa_E_R_lambda", "t_ms", "mean_position_offset_sites",
              "width_sites", "return_probability"});
  for (size_t i = 0; i < kappas.size(); ++i) {
    bim_trajectory* t = handles.items[i];
    write_density(density, kappas[i], t);
    const int start = bim_trajectory_start_site(t);
    for (size_t k = 0; k < bim_trajectory_samples(t); ++k) {
      double t_ms = 0.0, re = 0.0, im = 0.0;
      bim_transport_stats s{};
      check(bim_trajectory_time_ms(t, k, &t_ms));
      check(bim_trajectory_stats(t, k, &s));
      check(bim_trajectory_element(t, k, start, start, &re, &im));
      series.row({fmt(kappas[i]), fmt(t_ms), fmt(s.mean_position - start),
                  fmt(s.sigma), fmt(re)});
    }
  }
}

// ---- driver --------------------------------------------------------------

std::string section_for(const std::string& sub) {
  if (sub == "potential") return "potential";
  if (sub == "dephasing-scan") return "scan";
  if (sub == "gate-fidelity") return "gate";
  if (sub == "cluster-mc") return "mc";
  return "transport";
}

json manifest(const Run& r, double wall) {
  json params = json::object();
  json grid = json::object();
  for (size_t i = 0; i < bim_config_key_count(); ++i) {
    const std::string key = bim_config_key_name(i);
    const std::string value = get(r.config, key);
    params[key] = value;
    if (key.rfind("grid.", 0) == 0) grid[key.substr(5)] = value;
  }
  size_t count = 0;
  check(bim_model_warnings(r.model, number(r.config, "regime.threshold"), nullptr, 0, &count));
  std::vector<bim_warning> w(count);
  if (count) {
    check(bim_model_warnings(r.model, number(r.config, "regime.threshold"), w.data(),
                             w.size(), &count));
  }
  json warnings = json::array();
  for (const auto& x : w) {
    warnings.push_back({{"condition", x.condition},
                        {"ratio", jnum(x.ratio)},
                        {"threshold", jnum(x.threshold)}});
  }
  json outputs = json::array();
  for (const auto& p : r.outputs) outputs.push_back(p.filename().string());
  const bim_derived& d = r.derived;
  json derived = {{"dimension", d.dimension},
                  {"healing_length_m", jnum(d.healing_length_m)},
                  {"sound_speed_m_s", jnum(d.sound_speed_m_s)},
                  {"oscillator_length_m", jnum(d.oscillator_length_m)},
                  {"recoil_energy_J", jnum(d.recoil_energy_j)},
                  {"site_spacing_m", jnum(d.site_spacing_m)},
                  {"time_unit_s", jnum(d.time_unit_s)},
                  {"gn0_E_R", jnum(d.gn0)},
                  {"hopping_E_R", jnum(d.hopping)},
                  {"stark_E_R", jnum(d.stark)}};
  json seeds = json::array();
  if (r.seeds.empty()) {
    seeds.push_back(r.seed);
  } else {
    for (auto s : r.seeds) seeds.push_back(s);
  }
  return {{"subcommand", r.subcommand},
          {"version", bim_version()},
          {"parameters", params},
          {"grid", grid},
          {"derived", derived},
          {"seeds", seeds},
          {"threads", r.threads},
          {"wall_time_s", wall},
          {"outputs", outputs},
          {"warnings", warnings},
          {"results", r.extra}};
}

int execute(const std::string& sub, const std::string& config_path,
            const std::vector<std::string>& assignments, const std::string& out_dir,
            uint64_t seed, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  ConfigHandle config;
  if (config_path.empty()) {
    check(bim_config_create(nullptr, &config.ptr));
  } else {
    check(bim_config_load(config_path.c_str(), &config.ptr));
  }
  // A preset given on the command line is applied before other overrides.
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Failure(BIM_ERR_CONFIG, "expected key=value, got '" + a + "'");
    }
    std::string key = a.substr(0, eq);
    if (key != "preset" && key.find('.') == std::string::npos) {
      key = section_for(sub) + "." + key;
    }
    kv.emplace_back(key, a.substr(eq + 1));
  }
  for (const auto& [k, v] : kv) {
    if (k == "preset") check(bim_config_set(config.ptr, k.c_str(), v.c_str()));
  }
  for (const auto& [k, v] : kv) {
    if (k != "preset") check(bim_config_set(config.ptr, k.c_str(), v.c_str()));
  }

  ModelHandle model;
  check(bim_model_create(config.ptr, &model.ptr));
  Run r;
  r.subcommand = sub;
  r.out_dir = out_dir;
  r.seed = seed;
  r.threads = threads;
  r.config = config.ptr;
  r.model = model.ptr;
  check(bim_model_derived(model.ptr, &r.derived));
  std::error_code ec;
  fs::create_directories(r.out_dir, ec);
  if (ec) throw Failure(BIM_ERR_IO, "cannot create " + r.out_dir.string());

  if (sub == "potential") run_potential(r);
  else if (sub == "dephasing-scan") run_dephasing_scan(r);
  else if (sub == "gate-fidelity") run_gate_fidelity(r);
  else if (sub == "cluster-mc") run_cluster_mc(r);
  else if (sub == "transport") run_transport(r);
  else if (sub == "bloch") run_bloch(r);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path mpath = r.out_dir / (sub + ".manifest.json");
  std::ofstream mout(mpath);
  if (!mout) throw Failure(BIM_ERR_IO, "cannot write " + mpath.string());
  mout << manifest(r, wall).dump(2) << '\n';
  for (const auto& w : manifest(r, wall)["warnings"]) {
    std::cerr << "warning: " << w["condition"].get<std::string>() << " ratio "
              << w["ratio"].dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impurity atoms in an optical lattice coupled to a condensate"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value or JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "base random seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "key=value (repeatable)");
  app.set_version_flag("--version", std::string(bim_version()));

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"potential", "mediated potential V(distance)"},
      {"dephasing-scan", "Gamma triple along time, distance or temperature"},
      {"gate-fidelity", "controlled-phase gate time and average fidelity"},
      {"cluster-mc", "lattice-gas Metropolis clustering"},
      {"transport", "master-equation spreading from one site"},
      {"bloch", "tilted-lattice Bloch oscillations"}};
  std::vector<std::string> positional;
  for (const auto& [name, help] : subs) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->add_option("assignments", positional, "key=value overrides");
  }
  CLI11_PARSE(app, argc, argv);

  std::string sub;
  for (const auto* s : app.get_subcommands()) sub = s->get_name();
  std::vector<std::string> assignments = overrides;
  assignments.insert(assignments.end(), positional.begin(), positional.end());
  try {
    return execute(sub, config_path, assignments, out_dir, seed, threads);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
