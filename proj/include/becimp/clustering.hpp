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

#ifndef BECIMP_CLUSTERING_HPP_
#define BECIMP_CLUSTERING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "becimp/interaction.hpp"

namespace becimp {

// Periodic lattice: a ring of `length` sites (D = 1) or a length x length
// torus (D = 2). Site index is x + length * y.
struct Lattice {
  int dimension = 1;
  int length = 2;

  int sites() const { return dimension == 1 ? length : length * length; }
  // Nearest neighbours with periodic wrap (2 in 1D, 4 in 2D; duplicates
  // removed for tiny lattices).
  std::vector<int> neighbours(int site) const;
  // Minimum-image offsets (|dx|, |dy|) between two sites.
  std::pair<int, int> offset(int a, int b) const;
};

struct LatticeConfiguration {
  Lattice lattice;
  std::vector<std::uint8_t> occupation;

  int atoms() const;
};

// Throws Error(kInvalidParameter) for atoms outside [0, sites].
LatticeConfiguration random_configuration(const Lattice& lattice, int atoms,
                                          std::uint64_t seed);
LatticeConfiguration configuration_from_string(const Lattice& lattice,
                                               const std::string& bits);
// Rows of 0/1 characters (one row for a ring).
std::string to_string(const LatticeConfiguration& config);

enum class PotentialMode { kNearestNeighbour, kFull };

// How -sum_{i,j} V_ij n_i n_j counts pairs: kOrdered sums both orders (each
// pair contributes 2 V), kUnordered counts each pair once.
enum class PairCounting { kOrdered, kUnordered };

// Pair energies on a lattice. Stored as positive magnitudes; the energy of a
// configuration is -factor * sum_{pairs} V(pair).
class PairPotential {
 public:
  // Nearest-neighbour only with V12 = `nearest` (E_R).
  static PairPotential nearest_neighbour(const Lattice& lattice, double nearest,
                                         PairCounting counting);
  // Full table evaluated at minimum-image distances up to `max_offset`
  // sites (Euclidean in 2D). Throws Error(kConfig) when the table is shorter
  // than max_offset or the lattice dimension differs from the table.
  static PairPotential full(const Lattice& lattice,
                            const std::vector<double>& distances,
                            const std::vector<double>& values, double max_offset,
                            PairCounting counting);
  // Full potential from the mediated interaction of `model`.
  static PairPotential from_model(const Model& model, const Lattice& lattice,
                                  double max_offset, PairCounting counting,
                                  const GridSpec& spec = {});

  const Lattice& lattice() const { return lattice_; }
  PotentialMode mode() const { return mode_; }
  PairCounting counting() const { return counting_; }
  double pair_factor() const { return counting_ == PairCounting::kOrdered ? 2.0 : 1.0; }
  double nearest() const { return nearest_; }
  // Bond energy of a nearest-neighbour pair: pair_factor * V12.
  double bond_energy() const { return pair_factor() * nearest_; }

  // V between two distinct sites (minimum image), without the pair factor.
  double between(int a, int b) const;

 private:
  Lattice lattice_;
  PotentialMode mode_ = PotentialMode::kNearestNeighbour;
  PairCounting counting_ = PairCounting::kOrdered;
  double nearest_ = 0.0;
  int half_ = 0;
  std::vector<double> by_offset_;  // (dx, dy) -> V, dx, dy in [0, half]
};

// -factor * sum over pairs of V n_i n_j, plus `onsite_u` times the number of
// doubly occupied sites (always zero for hard-core occupations).
double energy(const LatticeConfiguration& config, const PairPotential& potential,
              double onsite_u = 0.0);

// Connected components under nearest-neighbour adjacency with periodic wrap.
std::vector<int> cluster_sizes(const LatticeConfiguration& config);
int count_clusters(const LatticeConfiguration& config);
int largest_cluster(const LatticeConfiguration& config);

enum class MoveKind { kGlobal, kLocalHop };

struct McOptions {
  double temperature_nk = 1.0;
  long long steps = 1000000;        // proposed moves after equilibration
  long long equilibration = 100000;
  long long sample_interval = 1000;
  std::uint64_t seed = 1;
  MoveKind move = MoveKind::kGlobal;
  // T -> 0 dynamics: accept only moves with dE <= 0. Requires
  // temperature_nk unused.
  bool quench = false;
  // Recompute the full energy this often and compare to the running sum.
  long long audit_interval = 100000;
  // Record the occupation pattern at every sample.
  bool record_states = false;
};

struct McStats {
  std::size_t samples = 0;
  double mean_clusters = 0.0;
  double std_clusters = 0.0;
  double mean_largest = 0.0;
  double std_largest = 0.0;
  double mean_energy = 0.0;
  double std_energy = 0.0;
  double acceptance = 0.0;
  double max_audit_error = 0.0;
  std::vector<double> cluster_series;
  std::vector<double> largest_series;
  std::vector<double> energy_series;
  std::vector<std::uint64_t> state_series;  // bit patterns, M <= 64 only
  LatticeConfiguration final_configuration;
};

// `energy_per_nk` is k_B * 1 nK in the potential's energy unit (E_R).
// Throws Error(kDomain) for temperature <= 0 without quench and
// Error(kInvalidParameter) for sample_interval < 1.
McStats metropolis_run(const PairPotential& potential,
                       LatticeConfiguration initial, const McOptions& options,
                       double energy_per_nk);

// Closed-form nearest-neighbour results; `bond` is the bond energy and
// `thermal` is k_B T in the same unit.
// Normalised 1D cluster number with x = exp(bond / k_B T):
//   (M/N) [sqrt(1 + 4 (M-N) N (x - 1)/M^2) - 1] / (2 (x - 1)).
double analytic_cluster_number_1d(int sites, int atoms, double bond,
                                  double thermal);
// 2D island size with J_s = bond / 4, N_r = 1 - 2 filling; zero above T_I.
double analytic_island_size_2d(double filling, double bond, double thermal);
// k_B T_I = 2 J_s / asinh((1 - N_r^8)^{-1/4}).
double transition_temperature(double bond, double reduced_magnetisation);

}  // namespace becimp

#endif  // BECIMP_CLUSTERING_HPP_
