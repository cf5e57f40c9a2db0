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

#include "becimp/error.hpp"
#include "becimp/params.hpp"
#include "test_support.hpp"

using namespace becimp;
using becimp::testing::relative;

namespace {

BecParams rb_1d() {
  BecParams b;
  b.boson_mass_kg = species::kRubidium87;
  b.density = 5e6;
  b.coupling_g = 1e-38;
  b.dimension = 1;
  return b;
}

LatticeParams k_lattice() {
  LatticeParams l;
  l.trap_frequency = 2.0 * std::numbers::pi * 30e3;
  return l;
}

}  // namespace

TEST_CASE("derived lengths and energies follow from SI inputs") {
  const BecParams b = rb_1d();
  const LatticeParams l = k_lattice();
  const DerivedQuantities d = derive(b, l);
  const double hbar = 1.054571817e-34;
  const double gn0 = b.coupling_g * b.density;
  CHECK(relative(d.healing_length_m, hbar / std::sqrt(b.boson_mass_kg * gn0)) < 1e-14);
  CHECK(relative(d.sound_speed_m_s, std::sqrt(gn0 / b.boson_mass_kg)) < 1e-14);
  CHECK(relative(d.oscillator_length_m,
                 std::sqrt(hbar / (l.impurity_mass_kg * l.trap_frequency))) < 1e-14);
  CHECK(d.site_spacing_m == doctest::Approx(395e-9).epsilon(1e-14));
  // hbar = c m xi: the healing length and sound speed share one scale.
  CHECK(relative(d.healing_length_m * d.sound_speed_m_s * b.boson_mass_kg, hbar) < 1e-13);
}

TEST_CASE("recoil energy of potassium-41 at 790 nm") {
  const DerivedQuantities d = derive(rb_1d(), k_lattice());
  const double nk = d.recoil_energy_j / 1.380649e-23 * 1e9;
  CHECK(nk == doctest::Approx(374.6).epsilon(2e-3));
}

TEST_CASE("lattice-unit model is consistent with the SI values") {
  const Model m = make_model(rb_1d(), k_lattice(), CouplingParams{});
  const double lambda = 790e-9;
  CHECK(relative(m.healing_length, m.derived.healing_length_m / lambda) < 1e-14);
  CHECK(relative(m.x0, m.derived.oscillator_length_m / lambda) < 1e-14);
  // Free energy of a condensate atom: hbar^2 k^2 / 2 m_b with k in 1/lambda.
  const double k = 3.7;
  const double si_energy = std::pow(1.054571817e-34 * k / lambda, 2) /
                           (2.0 * species::kRubidium87);
  CHECK(relative(m.free_energy(k), si_energy / m.recoil_energy_j()) < 1e-12);
  // Sound speed in lattice units: c = sqrt(gn0 / m_b) = xi gn0 / hbar.
  CHECK(relative(m.sound_speed, m.healing_length * m.gn0) < 1e-12);
  CHECK(relative(m.closed_form_length(), m.healing_length / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("invalid parameters are rejected") {
  BecParams b = rb_1d();
  b.density = -1.0;
  CHECK_THROWS_AS(derive(b, k_lattice()), Error);
  try {
    derive(b, k_lattice());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidParameter);
  }
  b = rb_1d();
  b.dimension = 4;
  CHECK_THROWS_AS(derive(b, k_lattice()), Error);
  b = rb_1d();
  b.temperature_k = -1e-9;
  CHECK_THROWS_AS(derive(b, k_lattice()), Error);
  LatticeParams l = k_lattice();
  l.trap_frequency = 0.0;
  CHECK_THROWS_AS(derive(rb_1d(), l), Error);
  l = k_lattice();
  l.site_count = 1;
  CHECK_THROWS_AS(derive(rb_1d(), l), Error);
}

TEST_CASE("thermal occupation") {
  CHECK(thermal_occupation(1e-30, 0.0) == 0.0);
  const double e = 1.380649e-23 * 5e-9;
  CHECK(thermal_occupation(e, 5e-9) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
  // High-temperature limit kT / E.
  CHECK(thermal_occupation(e, 5e-3) == doctest::Approx(1e6).epsilon(1e-5));
  CHECK_THROWS_AS(thermal_occupation(0.0, 1e-9), Error);
  CHECK_THROWS_AS(thermal_occupation(e, -1.0), Error);
  for (double x : {0.01, 0.3, 2.0, 10.0}) {
    CHECK(thermal_factor(x, 1.0) == doctest::Approx(1.0 + 2.0 * bose_occupation(x, 1.0)).epsilon(1e-12));
  }
  CHECK(thermal_factor(1.0, 0.0) == 1.0);
}

TEST_CASE("trap frequency from lattice depth") {
  const double er = std::pow(2.0 * std::numbers::pi * 1.054571817e-34, 2) /
                    (2.0 * species::kPotassium41 * 790e-9 * 790e-9);
  const double w = trap_frequency_from_depth(9.0, 790e-9, species::kPotassium41);
  CHECK(relative(w * 1.054571817e-34, 6.0 * er) < 1e-13);
}

TEST_CASE("regime warnings") {
  Model m = becimp::testing::preset_model("fig3");
  SUBCASE("zero coupling has no warnings") {
    CHECK(validate_regime(with_kappa(m, 0.0)).empty());
  }
  SUBCASE("weak coupling ratio is |kappa| / (g n0 xi^D)") {
    const auto w = validate_regime(m, std::nullopt, 0.0);
    REQUIRE(!w.empty());
    CHECK(w[0].condition == "weak_coupling");
    CHECK(relative(w[0].ratio, m.kappa / (m.gn0 * m.healing_length)) < 1e-14);
  }
  SUBCASE("hopping enables the markov and born checks") {
    const Model t = becimp::testing::preset_model("fig4");
    const auto w = validate_regime(t, 1e-3, 0.0);
    bool markov = false, born = false;
    for (const auto& x : w) {
      if (x.condition == "markov") {
        markov = true;
        CHECK(relative(x.ratio, t.hopping * 0.5 / t.sound_speed) < 1e-14);
      }
      if (x.condition == "born") {
        born = true;
        CHECK(relative(x.ratio, 1e-3 / t.hopping) < 1e-14);
      }
    }
    CHECK(markov);
    CHECK(born);
  }
  SUBCASE("large threshold silences everything") {
    CHECK(validate_regime(m, std::nullopt, 1e9).empty());
  }
}
