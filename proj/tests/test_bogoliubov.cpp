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

#include "becimp/bogoliubov.hpp"
#include "becimp/error.hpp"
#include "becimp/rng.hpp"
#include "test_support.hpp"

using namespace becimp;
using becimp::testing::relative;

namespace {

constexpr double kPi = std::numbers::pi;

// int d^D q / (2 pi)^D exp(-a q^2 + i q.r) = (4 pi a)^{-D/2} exp(-r^2 / 4a).
double gaussian_transform(int dim, double a, double r) {
  return std::pow(4.0 * kPi * a, -0.5 * dim) * std::exp(-r * r / (4.0 * a));
}

std::vector<double> gaussian_sums(const MomentumGrid& g, double a,
                                  const std::vector<double>& rs) {
  std::vector<double> out(rs.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double q = g.magnitude[i];
    for (std::size_t k = 0; k < rs.size(); ++k) {
      out[k] += g.weight[i] * std::exp(-a * q * q) * g.separation_factor(i, rs[k]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("dispersion limits") {
  const Model m = becimp::testing::preset_model("fig3");
  SUBCASE("phonon regime: omega = c q") {
    const double q = 1e-4 / m.healing_length;
    CHECK(relative(dispersion(m, q).phonon_energy, m.sound_speed * q) < 1e-6);
  }
  SUBCASE("particle regime: omega = eps + g n0") {
    const double q = 1e3 / m.healing_length;
    const Dispersion d = dispersion(m, q);
    CHECK(relative(d.phonon_energy, d.free_energy + m.gn0) < 1e-5);
  }
  SUBCASE("closed form") {
    for (double q : {0.1, 1.0, 7.0, 40.0}) {
      const double eps = m.free_energy(q);
      CHECK(relative(dispersion(m, q).phonon_energy, std::sqrt(eps * (eps + 2.0 * m.gn0))) < 1e-15);
    }
  }
  SUBCASE("group velocity matches a central difference") {
    for (double q : {0.05, 0.7, 3.0, 20.0}) {
      const double h = 1e-6 * q;
      const double fd = (dispersion(m, q + h).phonon_energy - dispersion(m, q - h).phonon_energy) / (2 * h);
      CHECK(relative(group_velocity(m, q), fd) < 1e-7);
    }
  }
  SUBCASE("group velocity tends to c") {
    CHECK(relative(group_velocity(m, 1e-6), m.sound_speed) < 1e-6);
  }
}

TEST_CASE("coupling magnitude and form factor") {
  const Model m = becimp::testing::preset_model("fig3");
  const double volume = 400.0;
  const Vec3 q{2.5, 0.0, 0.0};
  const Vec3 r{1.5, 0.0, 0.0};
  const auto f = form_factor(m, q, r, volume);
  CHECK(std::abs(f) * std::sqrt(volume) ==
        doctest::Approx(std::exp(-0.25 * q[0] * q[0] * m.x0 * m.x0)).epsilon(1e-13));
  CHECK(std::arg(f) == doctest::Approx(std::remainder(q[0] * r[0], 2 * kPi)).epsilon(1e-12));
  // |g_q|^2 Omega = coupling_weight.
  const auto g = coupling(m, q, r, volume);
  CHECK(relative(std::norm(g) * volume, coupling_weight(m, q[0])) < 1e-12);
  CHECK(coupling_weight(m, 1.0, 0.0) == 0.0);
}

TEST_CASE("radial grids integrate a Gaussian in every dimension") {
  for (int dim = 1; dim <= 3; ++dim) {
    CAPTURE(dim);
    Model m = becimp::testing::preset_model(dim == 3 ? "gate3d" : dim == 2 ? "fig5" : "fig3");
    GridSpec spec;
    const double a = 0.3;
    const std::vector<double> rs = {0.0, 0.5, 1.0, 2.5};
    const double q_max = radial_cutoff(m, spec);
    REQUIRE(a * q_max * q_max > 60.0);
    const ConvergedSum s = converge(m, spec, Oscillation{2.5, 0.0},
                                    [&](const MomentumGrid& g) { return gaussian_sums(g, a, rs); });
    for (std::size_t k = 0; k < rs.size(); ++k) {
      CAPTURE(rs[k]);
      CHECK(s.values[k] == doctest::Approx(gaussian_transform(dim, a, rs[k])).epsilon(1e-9));
    }
    CHECK(s.residual <= spec.tolerance);
  }
}

TEST_CASE("finite grids are mode sums with weight 1/L^D") {
  const Model m = becimp::testing::preset_model("fig3");
  const MomentumGrid g = make_finite_grid(m, 40.0, 10);
  CHECK(g.size() == 20);
  CHECK(g.volume == doctest::Approx(20.0));
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum += g.weight[i];
    CHECK(g.separation_factor_imag(i, 0.0) == 0.0);
  }
  CHECK(sum == doctest::Approx(1.0));
  // Odd part cancels across +q and -q.
  double imag = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) imag += g.weight[i] * g.separation_factor_imag(i, 1.3);
  CHECK(std::abs(imag) < 1e-14);

  const Model m2 = becimp::testing::preset_model("fig5");
  const MomentumGrid g2 = make_finite_grid(m2, 20.0, 3);
  CHECK(g2.size() == 48);
  CHECK(g2.zero_mode_excluded);
}

TEST_CASE("finite grid approaches the thermodynamic Gaussian") {
  const Model m = becimp::testing::preset_model("fig3");
  const double a = 0.3;
  // L = 1000 lambda, |q| <= 2 pi 6000 / L.
  const MomentumGrid g = make_finite_grid(m, 2000.0, 6000);
  const auto v = gaussian_sums(g, a, {0.0, 1.0});
  // Only the excluded q = 0 mode differs: 1/L.
  CHECK(v[0] + 1.0 / 1000.0 == doctest::Approx(gaussian_transform(1, a, 0.0)).epsilon(1e-12));
  CHECK(v[1] + 1.0 / 1000.0 == doctest::Approx(gaussian_transform(1, a, 1.0)).epsilon(1e-12));
}

TEST_CASE("oscillation adds panels and refinement doubles them") {
  const Model m = becimp::testing::preset_model("fig3");
  GridSpec spec;
  const MomentumGrid quiet = make_grid(m, spec, Oscillation{0.0, 0.0});
  const MomentumGrid busy = make_grid(m, spec, Oscillation{50.0, 500.0});
  CHECK(busy.size() > quiet.size());
  CHECK(make_grid(m, spec, Oscillation{}, 2).size() == 4 * quiet.size());
  CHECK(quiet.size() % spec.order == 0);
  double sum = 0.0;
  for (double w : quiet.weight) sum += w;
  // 1D radial measure 1/pi over [0, q_max].
  CHECK(sum == doctest::Approx(quiet.q_max / kPi).epsilon(1e-12));
}

TEST_CASE("grid configuration errors") {
  const Model m = becimp::testing::preset_model("fig3");
  GridSpec spec;
  spec.q_max_factor = 0.1;
  CHECK_THROWS_AS(radial_cutoff(m, spec), Error);
  spec = GridSpec{};
  spec.order = 17;
  CHECK_THROWS_AS(make_grid(m, spec, Oscillation{}), Error);
  spec = GridSpec{};
  spec.q_max_factor = -1.0;
  CHECK_THROWS_AS(radial_cutoff(m, spec), Error);
}

TEST_CASE("unconverged sums raise an accuracy error with the residual") {
  const Model m = becimp::testing::preset_model("fig3");
  GridSpec spec;
  spec.max_refinements = 1;
  spec.tolerance = 1e-300;
  int calls = 0;
  auto eval = [&](const MomentumGrid& g) {
    ++calls;
    return std::vector<double>{static_cast<double>(g.size())};
  };
  try {
    converge(m, spec, Oscillation{}, eval);
    FAIL("expected accuracy error");
  } catch (const AccuracyError& e) {
    CHECK(e.code() == ErrorCode::kAccuracy);
    CHECK(e.residual() > 0.0);
  }
  CHECK(calls == 2);
}

TEST_CASE("series helpers are continuous across their switch points") {
  for (double x : {1e-3, 1.0001e-3, 0.9999e-3, 1e-6, 0.5, 3.0}) {
    CAPTURE(x);
    const double x2 = x * x;
    // Long Taylor series below 1e-2, where 1 - cos(x) cancels.
    const double ref = x < 1e-2 ? 0.5 - x2 / 24.0 + x2 * x2 / 720.0 - x2 * x2 * x2 / 40320.0
                                : (1.0 - std::cos(x)) / x2;
    CHECK(one_minus_cos_over_sq(x) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-12));
  }
  CHECK(one_minus_cos_over_sq(0.0) == 0.5);
  CHECK(sinc(0.0) == 1.0);
}

TEST_CASE("property: radial measure integrates random Gaussians") {
  CounterRng rng(2026, 1);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(3));
    const Model m = becimp::testing::preset_model(dim == 3 ? "gate3d" : dim == 2 ? "fig5" : "fig3");
    const double q_max = radial_cutoff(m, GridSpec{});
    const double a = (60.0 + 200.0 * rng.uniform()) / (q_max * q_max);
    // Keep r^2 / 4a below 4 so the transform stays well above round-off.
    const double r = 4.0 * std::sqrt(a) * rng.uniform();
    CAPTURE(dim);
    CAPTURE(a);
    CAPTURE(r);
    const auto s = converge(m, GridSpec{}, Oscillation{r, 0.0},
                            [&](const MomentumGrid& g) { return gaussian_sums(g, a, {r}); });
    CHECK(s.values[0] == doctest::Approx(gaussian_transform(dim, a, r)).epsilon(1e-8));
  }
}
