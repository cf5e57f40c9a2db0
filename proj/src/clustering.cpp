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

#include "becimp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "becimp/error.hpp"
#include "becimp/rng.hpp"

namespace becimp {

namespace {

void check_lattice(const Lattice& l) {
  if (l.dimension != 1 && l.dimension != 2) {
    throw Error(ErrorCode::kUnsupportedDimension, "lattice gas supports D = 1 or 2");
  }
  if (l.length < 2) {
    throw Error(ErrorCode::kInvalidParameter, "lattice length must be >= 2");
  }
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  const double n = static_cast<double>(v.size());
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / (n - 1.0));
  }
  return m;
}

}  // namespace

std::vector<int> Lattice::neighbours(int site) const {
  std::vector<int> out;
  if (dimension == 1) {
    out = {(site + 1) % length, (site + length - 1) % length};
  } else {
    const int x = site % length;
    const int y = site / length;
    out = {(x + 1) % length + length * y, (x + length - 1) % length + length * y,
           x + length * ((y + 1) % length), x + length * ((y + length - 1) % length)};
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), site), out.end());
  return out;
}

std::pair<int, int> Lattice::offset(int a, int b) const {
  auto wrap = [&](int d) {
    d = std::abs(d);
    return std::min(d, length - d);
  };
  if (dimension == 1) return {wrap(a - b), 0};
  return {wrap(a % length - b % length), wrap(a / length - b / length)};
}

int LatticeConfiguration::atoms() const {
  return static_cast<int>(std::count(occupation.begin(), occupation.end(), 1));
}

LatticeConfiguration random_configuration(const Lattice& lattice, int atoms,
                                          std::uint64_t seed) {
  check_lattice(lattice);
  const int m = lattice.sites();
  if (atoms < 0 || atoms > m) {
    throw Error(ErrorCode::kInvalidParameter, "atom count must lie in [0, sites]");
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(seed, 0xc0f1);
  for (int i = 0; i < atoms; ++i) {
    const int j = i + static_cast<int>(rng.below(m - i));
    std::swap(order[i], order[j]);
  }
  LatticeConfiguration c{lattice, std::vector<std::uint8_t>(m, 0)};
  for (int i = 0; i < atoms; ++i) c.occupation[order[i]] = 1;
  return c;
}

LatticeConfiguration configuration_from_string(const Lattice& lattice,
                                               const std::string& bits) {
  check_lattice(lattice);
  LatticeConfiguration c{lattice, {}};
  for (char ch : bits) {
    if (ch == '0' || ch == '1') c.occupation.push_back(ch == '1');
  }
  if (static_cast<int>(c.occupation.size()) != lattice.sites()) {
    throw Error(ErrorCode::kInvalidParameter,
                "occupation string length does not match the lattice");
  }
  return c;
}

std::string to_string(const LatticeConfiguration& c) {
  std::string out;
  const int row = c.lattice.length;
  for (std::size_t i = 0; i < c.occupation.size(); ++i) {
    out.push_back(c.occupation[i] ? '1' : '0');
    if ((i + 1) % row == 0) out.push_back('\n');
  }
  return out;
}

PairPotential PairPotential::nearest_neighbour(const Lattice& lattice,
                                               double nearest,
                                               PairCounting counting) {
  check_lattice(lattice);
  PairPotential p;
  p.lattice_ = lattice;
  p.mode_ = PotentialMode::kNearestNeighbour;
  p.counting_ = counting;
  p.nearest_ = nearest;
  return p;
}

PairPotential PairPotential::full(const Lattice& lattice,
                                  const std::vector<double>& distances,
                                  const std::vector<double>& values,
                                  double max_offset, PairCounting counting) {
  check_lattice(lattice);
  if (distances.size() != values.size() || distances.empty()) {
    throw Error(ErrorCode::kConfig, "potential table is empty or malformed");
  }
  const double table_reach = *std::max_element(distances.begin(), distances.end());
  const int half = lattice.length / 2;
  PairPotential p;
  p.lattice_ = lattice;
  p.mode_ = PotentialMode::kFull;
  p.counting_ = counting;
  p.half_ = half;
  p.by_offset_.assign((half + 1) * (half + 1), 0.0);
  const int ny = lattice.dimension == 1 ? 0 : half;
  for (int dx = 0; dx <= half; ++dx) {
    for (int dy = 0; dy <= ny; ++dy) {
      if (dx == 0 && dy == 0) continue;
      const double r = std::hypot(dx, dy);
      if (r > max_offset + 1e-12) continue;
      if (r > table_reach + 1e-9) {
        std::ostringstream os;
        os << "potential table reaches " << table_reach
           << " sites but distance " << r << " is requested";
        throw Error(ErrorCode::kConfig, os.str());
      }
      std::size_t best = 0;
      for (std::size_t k = 1; k < distances.size(); ++k) {
        if (std::abs(distances[k] - r) < std::abs(distances[best] - r)) best = k;
      }
      if (std::abs(distances[best] - r) > 1e-9) {
        throw Error(ErrorCode::kConfig, "potential table lacks a lattice distance");
      }
      p.by_offset_[dx * (half + 1) + dy] = values[best];
    }
  }
  p.nearest_ = p.by_offset_[1 * (half + 1)];
  return p;
}

PairPotential PairPotential::from_model(const Model& model,
                                        const Lattice& lattice,
                                        double max_offset,
                                        PairCounting counting,
                                        const GridSpec& spec) {
  check_lattice(lattice);
  if (model.dimension != lattice.dimension) {
    throw Error(ErrorCode::kConfig, "model and lattice dimensions differ");
  }
  const int half = lattice.length / 2;
  const int ny = lattice.dimension == 1 ? 0 : half;
  std::vector<double> distances;
  for (int dx = 0; dx <= half; ++dx) {
    for (int dy = 0; dy <= ny; ++dy) {
      const double r = std::hypot(dx, dy);
      if ((dx || dy) && r <= max_offset + 1e-12) distances.push_back(r);
    }
  }
  std::sort(distances.begin(), distances.end());
  distances.erase(std::unique(distances.begin(), distances.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                  distances.end());
  const std::vector<double> values = mediated_potentials(model, distances, spec);
  return full(lattice, distances, values, max_offset, counting);
}

double PairPotential::between(int a, int b) const {
  if (a == b) return 0.0;
  const auto [dx, dy] = lattice_.offset(a, b);
  if (mode_ == PotentialMode::kNearestNeighbour) {
    return dx + dy == 1 ? nearest_ : 0.0;
  }
  return by_offset_[dx * (half_ + 1) + dy];
}

double energy(const LatticeConfiguration& c, const PairPotential& p,
              double onsite_u) {
  if (c.lattice.dimension != p.lattice().dimension ||
      c.lattice.length != p.lattice().length) {
    throw Error(ErrorCode::kConfig, "configuration and potential lattices differ");
  }
  std::vector<int> occupied;
  int doubly = 0;
  for (std::size_t i = 0; i < c.occupation.size(); ++i) {
    if (c.occupation[i]) occupied.push_back(static_cast<int>(i));
    if (c.occupation[i] > 1) ++doubly;
  }
  double sum = 0.0;
  if (p.mode() == PotentialMode::kNearestNeighbour) {
    for (int i : occupied) {
      for (int j : c.lattice.neighbours(i)) {
        if (j > i && c.occupation[j]) sum += p.nearest();
      }
    }
  } else {
    for (std::size_t a = 0; a < occupied.size(); ++a) {
      for (std::size_t b = a + 1; b < occupied.size(); ++b) {
        sum += p.between(occupied[a], occupied[b]);
      }
    }
  }
  return -p.pair_factor() * sum + onsite_u * doubly;
}

std::vector<int> cluster_sizes(const LatticeConfiguration& c) {
  const int m = static_cast<int>(c.occupation.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < m; ++i) {
    if (!c.occupation[i]) continue;
    for (int j : c.lattice.neighbours(i)) {
      if (j > i && c.occupation[j]) {
        const int ri = find_root(parent, i);
        const int rj = find_root(parent, j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::map<int, int> sizes;
  for (int i = 0; i < m; ++i) {
    if (c.occupation[i]) ++sizes[find_root(parent, i)];
  }
  std::vector<int> out;
  out.reserve(sizes.size());
  for (const auto& [root, size] : sizes) out.push_back(size);
  return out;
}

int count_clusters(const LatticeConfiguration& c) {
  return static_cast<int>(cluster_sizes(c).size());
}

int largest_cluster(const LatticeConfiguration& c) {
  const std::vector<int> s = cluster_sizes(c);
  return s.empty() ? 0 : *std::max_element(s.begin(), s.end());
}

McStats metropolis_run(const PairPotential& p, LatticeConfiguration c,
                       const McOptions& opt, double energy_per_nk) {
  if (!opt.quench && !(opt.temperature_nk > 0.0)) {
    throw Error(ErrorCode::kDomain, "Metropolis sampling needs T > 0 (use quench for T -> 0)");
  }
  if (opt.sample_interval < 1) {
    throw Error(ErrorCode::kInvalidParameter, "sample interval must be >= 1");
  }
  if (opt.steps < 0 || opt.equilibration < 0) {
    throw Error(ErrorCode::kInvalidParameter, "step counts must be >= 0");
  }
  const Lattice& lat = c.lattice;
  const int m = lat.sites();
  if (static_cast<int>(c.occupation.size()) != m) {
    throw Error(ErrorCode::kInvalidParameter, "configuration size does not match lattice");
  }
  const double beta = opt.quench ? 0.0 : 1.0 / (opt.temperature_nk * energy_per_nk);
  const double factor = p.pair_factor();
  const bool nn = p.mode() == PotentialMode::kNearestNeighbour;

  std::vector<std::vector<int>> nbr(m);
  for (int i = 0; i < m; ++i) nbr[i] = lat.neighbours(i);

  std::vector<int> atoms, empties, slot(m);
  for (int i = 0; i < m; ++i) {
    if (c.occupation[i]) {
      slot[i] = static_cast<int>(atoms.size());
      atoms.push_back(i);
    } else {
      slot[i] = static_cast<int>(empties.size());
      empties.push_back(i);
    }
  }

  // Sum of V(site, k) over occupied k != site.
  auto field = [&](int site) {
    double h = 0.0;
    if (nn) {
      for (int j : nbr[site]) {
        if (c.occupation[j]) h += p.nearest();
      }
    } else {
      for (int k : atoms) {
        if (k != site) h += p.between(site, k);
      }
    }
    return h;
  };

  CounterRng rng(opt.seed, 0x3c);
  McStats st;
  double e = energy(c, p);
  long long accepted = 0;
  const long long total = opt.equilibration + opt.steps;
  const int n_atoms = static_cast<int>(atoms.size());
  const int n_empty = static_cast<int>(empties.size());

  for (long long step = 0; step < total; ++step) {
    if (n_atoms > 0 && n_empty > 0) {
      const int ai = static_cast<int>(rng.below(n_atoms));
      const int from = atoms[ai];
      int to;
      if (opt.move == MoveKind::kGlobal) {
        to = empties[rng.below(n_empty)];
      } else {
        const std::vector<int>& nb = nbr[from];
        to = nb[rng.below(nb.size())];
      }
      if (!c.occupation[to]) {
        const double h_from = field(from);
        const double h_to = field(to) - p.between(to, from);
        const double de = -factor * (h_to - h_from);
        bool accept = de <= 0.0;
        if (!accept && !opt.quench) accept = rng.uniform() < std::exp(-beta * de);
        if (accept) {
          c.occupation[from] = 0;
          c.occupation[to] = 1;
          const int ei = slot[to];
          atoms[ai] = to;
          empties[ei] = from;
          slot[to] = ai;
          slot[from] = ei;
          e += de;
          ++accepted;
        }
      }
    }
    const long long done = step + 1;
    if (opt.audit_interval > 0 && done % opt.audit_interval == 0) {
      const double exact = energy(c, p);
      st.max_audit_error = std::max(st.max_audit_error, std::abs(exact - e));
      e = exact;
    }
    if (done > opt.equilibration &&
        (done - opt.equilibration) % opt.sample_interval == 0) {
      const std::vector<int> sizes = cluster_sizes(c);
      st.cluster_series.push_back(static_cast<double>(sizes.size()));
      st.largest_series.push_back(
          sizes.empty() ? 0.0 : *std::max_element(sizes.begin(), sizes.end()));
      st.energy_series.push_back(e);
      if (opt.record_states && m <= 64) {
        std::uint64_t bits = 0;
        for (int i = 0; i < m; ++i) {
          if (c.occupation[i]) bits |= std::uint64_t{1} << i;
        }
        st.state_series.push_back(bits);
      }
    }
  }
  st.samples = st.cluster_series.size();
  const Moments mc = moments(st.cluster_series);
  const Moments ml = moments(st.largest_series);
  const Moments me = moments(st.energy_series);
  st.mean_clusters = mc.mean;
  st.std_clusters = mc.std;
  st.mean_largest = ml.mean;
  st.std_largest = ml.std;
  st.mean_energy = me.mean;
  st.std_energy = me.std;
  st.acceptance = total > 0 ? static_cast<double>(accepted) / total : 0.0;
  st.final_configuration = std::move(c);
  return st;
}

double analytic_cluster_number_1d(int sites, int atoms, double bond,
                                  double thermal) {
  if (!(thermal > 0.0)) throw Error(ErrorCode::kDomain, "temperature must be > 0");
  if (atoms <= 0 || atoms >= sites) {
    throw Error(ErrorCode::kDomain, "cluster number needs 0 < N < M");
  }
  const double mm = sites;
  const double n = atoms;
  const double xm1 = std::expm1(std::abs(bond) / thermal);
  if (xm1 == 0.0) return (mm - n) / mm;
  if (!std::isfinite(xm1)) return 0.0;
  const double z = 4.0 * (mm - n) * n * xm1 / (mm * mm);
  // sqrt(1 + z) - 1 written without cancellation.
  const double root = z / (std::sqrt(1.0 + z) + 1.0);
  return (mm / n) * root / (2.0 * xm1);
}

double analytic_island_size_2d(double filling, double bond, double thermal) {
  if (!(thermal > 0.0)) throw Error(ErrorCode::kDomain, "temperature must be > 0");
  if (!(filling > 0.0) || filling > 0.5) {
    throw Error(ErrorCode::kDomain, "island size needs 0 < filling <= 1/2");
  }
  const double js = std::abs(bond) / 4.0;
  const double nr = 1.0 - 2.0 * filling;
  const double s = std::sinh(2.0 * js / thermal);
  const double inner = 1.0 - std::pow(s, -4.0);
  if (!(inner > 0.0)) return 0.0;
  const double n0 = std::pow(inner, 0.125);
  if (n0 <= nr) return 0.0;
  return (1.0 + n0) * (n0 - nr) / (2.0 * n0 * (1.0 - nr));
}

double transition_temperature(double bond, double nr) {
  if (!(nr >= 0.0) || !(nr < 1.0)) {
    throw Error(ErrorCode::kDomain, "transition temperature needs 0 <= N_r < 1");
  }
  const double js = std::abs(bond) / 4.0;
  return 2.0 * js / std::asinh(std::pow(1.0 - std::pow(nr, 8.0), -0.25));
}

}  // namespace becimp
