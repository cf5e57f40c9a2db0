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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "becimp/error.hpp"
#include "becimp/interaction.hpp"
#include "test_support.hpp"

using namespace becimp;
using becimp::testing::relative;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent of the library dispersion: eps_b = xi^2 g n0 q^2 / 2 follows
// from xi = hbar / sqrt(m_b g n0).
struct RingOracle {
  double xi, gn0, n0, kappa, x0, spacing;
  explicit RingOracle(const Model& m)
      : xi(m.healing_length), gn0(m.gn0), n0(m.density), kappa(m.kappa), x0(m.x0),
        spacing(m.spacing) {}
  double weight_over_omega(double q) const {
    const double eps = 0.5 * xi * xi * gn0 * q * q;
    return kappa * kappa * n0 * std::exp(-0.5 * q * q * x0 * x0) / (eps + 2.0 * gn0);
  }
  // 1D ring of `sites` sites: (1/L) sum_{n != 0} d_q / omega_q cos(q delta a).
  double potential_1d(double delta, int sites) const {
    const double length = sites * spacing;
    double sum = 0.0;
    for (int n = 1;; ++n) {
      const double q = 2.0 * kPi * n / length;
      if (q * x0 > 9.0) break;
      sum += 2.0 * weight_over_omega(q) * std::cos(q * delta * spacing);
    }
    return sum / length;
  }
};

}  // namespace

TEST_CASE("1D potential matches a brute-force ring mode sum") {
  const Model m = becimp::testing::preset_model("fig3");
  const RingOracle ring(m);
  const auto v = mediated_potentials(m, {0.0, 1.0, 2.0, 5.0});
  const double ring_size = 8000.0;
  const double zero_mode = ring.weight_over_omega(0.0) / (ring_size * m.spacing);
  const std::vector<double> deltas = {0.0, 1.0, 2.0, 5.0};
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    CAPTURE(deltas[k]);
    CHECK(relative(v[k], ring.potential_1d(deltas[k], 8000) + zero_mode) < 1e-6);
  }
}

TEST_CASE("finite-grid mode agrees with the thermodynamic limit on large rings") {
  Config c = Config::preset("fig3");
  c.set("grid.mode", "finite");
  c.set("grid.length_sites", "4000");
  c.set("grid.n_max", "20000");
  const Model m = build_model(c);
  const GridSpec finite = build_grid_spec(c);
  const double v_finite = mediated_potential(m, 1.0, finite);
  const double v_inf = mediated_potential(m, 1.0);
  CHECK(relative(v_finite, v_inf) < 2e-3);
  CHECK(relative(v_finite, RingOracle(m).potential_1d(1.0, 4000)) < 1e-9);
}

TEST_CASE("3D quadrature reproduces the exact screened-Coulomb transform") {
  // Large trap frequency: x0 / xi well below 0.1.
  Config c = Config::preset("gate3d");
  c.set("lattice.omega_t", "2e7");
  const Model m = build_model(c);
  REQUIRE(m.x0 / m.healing_length < 0.1);
  const double xi_p = m.closed_form_length();
  const double g = m.gn0 / m.density;
  for (double sites : {2.0, 4.0, 8.0}) {
    CAPTURE(sites);
    const double r = sites * m.spacing;
    const double exact = m.kappa * m.kappa * std::exp(-std::sqrt(2.0) * r / xi_p) /
                         (4.0 * kPi * g * xi_p * xi_p * r);
    CHECK(relative(mediated_potential(m, sites), exact) < 1e-3);
    // The closed-form routine carries four times the exact transform.
    CHECK(relative(mediated_potential_3d_closed(m, sites), 4.0 * exact) < 1e-13);
  }
}

TEST_CASE("closed form domain errors") {
  CHECK_THROWS_AS(mediated_potential_3d_closed(becimp::testing::preset_model("fig3"), 1.0), Error);
  CHECK_THROWS_AS(mediated_potential_3d_closed(becimp::testing::preset_model("gate3d"), 0.0), Error);
}

TEST_CASE("potential structure") {
  const Model m = becimp::testing::preset_model("fig3");
  const PotentialTable t = potential_table(m, 10);
  REQUIRE(t.values.size() == 11);
  CHECK(t.residual <= 1e-8);
  for (int d = 0; d < 10; ++d) {
    CHECK(t.values[d] > t.values[d + 1]);
    CHECK(t.values[d + 1] > 0.0);
  }
  CHECK(t.at(-3) == t.at(3));
  // Exponential tail beyond the table.
  const double ratio = t.values[10] / t.values[9];
  CHECK(t.at(12) == doctest::Approx(t.values[10] * ratio * ratio).epsilon(1e-12));
  CHECK(polaron_energy(m) == doctest::Approx(t.values[0]).epsilon(1e-9));
  CHECK(with_kappa(m, 0.0).kappa == 0.0);
  CHECK(mediated_potential(with_kappa(m, 0.0), 1.0) == 0.0);
  CHECK_THROWS_AS(potential_table(m, -1), Error);
}

TEST_CASE("potential scales as kappa squared") {
  const Model m = becimp::testing::preset_model("fig3");
  const Model m2 = with_kappa(m, 2.0 * m.kappa);
  CHECK(relative(mediated_potential(m2, 1.0), 4.0 * mediated_potential(m, 1.0)) < 1e-12);
}

TEST_CASE("transient phase") {
  const Model m = becimp::testing::preset_model("gate3d");
  CHECK(transient_phase(m, 1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(transient_phase(m, 1.0, -1.0), Error);
  const double v = mediated_potential(m, 1.0);
  // Long times: the phase grows as V t minus a bounded offset.
  const double t1 = 100.0, t2 = 200.0;
  const double slope = (transient_phase(m, 1.0, t2) - transient_phase(m, 1.0, t1)) / (t2 - t1);
  CHECK(relative(slope, v) < 1e-6);
  // Short times: the phase lags V t.
  const double small = 0.1;
  CHECK(transient_phase(m, 1.0, small) > 0.0);
  CHECK(transient_phase(m, 1.0, small) < v * small);
  // The oscillating offset dies out, so the calibrated time tends to pi / V.
  const double tg = phase_calibrated_time(m, 1.0, kPi);
  CHECK(transient_phase(m, 1.0, tg) == doctest::Approx(kPi).epsilon(1e-8));
  CHECK(relative(tg, kPi / v) < 1e-6);
}
