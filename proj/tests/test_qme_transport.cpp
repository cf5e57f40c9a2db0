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
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "becimp/dephasing.hpp"
#include "becimp/error.hpp"
#include "becimp/interaction.hpp"
#include "becimp/qme_transport.hpp"
#include "test_support.hpp"

using namespace becimp;
using becimp::testing::relative;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force 1D ring sum of the dissipative kernel, +q and -q combined.
double ring_dissipative_kernel(const Model& m, double offset, double t,
                               double temperature_nk, int sites) {
  const double length = sites * m.spacing;
  const double kt = temperature_nk * m.kelvin_per_nk_energy;
  double sum = 0.0;
  for (int n = 1;; ++n) {
    const double q = 2.0 * kPi * n / length;
    if (q * m.x0 > 9.0) break;
    const double eps = 0.5 * m.healing_length * m.healing_length * m.gn0 * q * q;
    const double w = std::sqrt(eps * (eps + 2.0 * m.gn0));
    const double d = m.kappa * m.kappa * m.density * eps / w *
                     std::exp(-0.5 * q * q * m.x0 * m.x0);
    const double coth = kt > 0.0 ? 1.0 / std::tanh(w / (2.0 * kt)) : 1.0;
    sum += 2.0 * d * std::sin(w * t) / w * coth * std::cos(q * offset * m.spacing) / length;
  }
  return sum;
}

// Exact propagation of a coherent single-particle state by diagonalising the
// tilted hopping Hamiltonian.
Eigen::VectorXd exact_populations(int sites, int start, double hopping, double tilt,
                                  double t) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sites, sites);
  for (int j = 0; j < sites; ++j) {
    h(j, j) = tilt * (j - start);
    if (j + 1 < sites) h(j, j + 1) = h(j + 1, j) = -hopping;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sites);
  for (int k = 0; k < sites; ++k) {
    psi += v.col(k).cast<std::complex<double>>() *
           (std::polar(1.0, -es.eigenvalues()(k) * t) * v(start, k));
  }
  return psi.cwiseAbs2();
}

Model free_model(double tilt) {
  Model m = with_kappa(becimp::testing::preset_model("fig4"), 0.0);
  m.stark = tilt;
  return m;
}

}  // namespace

TEST_CASE("kernels vanish at t = 0 and without coupling") {
  const Model m = becimp::testing::preset_model("fig4");
  CHECK(dissipative_kernel(m, 0.0, 0.0, 100.0) == 0.0);
  CHECK(dissipative_kernel(m, 3.0, 0.0, 100.0) == 0.0);
  CHECK(coherent_kernel(m, 0.0, 0.0) == 0.0);
  const Model free = with_kappa(m, 0.0);
  CHECK(dissipative_kernel(free, 0.0, 10.0, 100.0) == 0.0);
  CHECK(coherent_kernel(free, 1.0, 10.0) == 0.0);
  CHECK_THROWS_AS(dissipative_kernel(m, 0.0, -1.0, 100.0), Error);
  CHECK_THROWS_AS(coherent_kernel(m, 0.0, -1.0), Error);
}

TEST_CASE("dissipative kernel matches a brute-force ring sum at 1 ms") {
  const Model m = becimp::testing::preset_model("fig4");
  const double t = m.from_seconds(1e-3);
  for (double offset : {0.0, 2.0}) {
    CAPTURE(offset);
    const double k = dissipative_kernel(m, offset, t, 100.0);
    // Richardson step removes the O(1/L) end-point error of the mode sum.
    const double r1 = ring_dissipative_kernel(m, offset, t, 100.0, 4000);
    const double r2 = ring_dissipative_kernel(m, offset, t, 100.0, 8000);
    CHECK(relative(k, 2.0 * r2 - r1) < 1e-5);
  }
}

TEST_CASE("dissipative kernel is even in the offset") {
  const Model m = becimp::testing::preset_model("fig4");
  const double t = m.from_seconds(2e-4);
  for (double d : {1.0, 4.0}) {
    CHECK(dissipative_kernel(m, d, t, 100.0) ==
          doctest::Approx(dissipative_kernel(m, -d, t, 100.0)).epsilon(1e-14));
  }
}

TEST_CASE("kernel cache agrees with direct evaluation") {
  const Model m = becimp::testing::preset_model("fig4");
  const double step = m.from_seconds(2e-5);
  const int count = 150;
  const KernelCache c = dissipative_kernel_cache(m, 6, step, count, 100.0);
  CHECK(c.times == count);
  CHECK(c.offsets == 6);
  const double k2 = m.kappa * m.kappa;
  for (int k : {0, 1, 63, 64, 65, 149}) {
    for (int d : {0, 1, 5}) {
      CAPTURE(k);
      CAPTURE(d);
      const double direct = dissipative_kernel(m, d, k * step, 100.0);
      CHECK(std::abs(k2 * c.at(k, d) - direct) <= 1e-7 * std::abs(direct) + 1e-18);
    }
  }
  CHECK_THROWS_AS(dissipative_kernel_cache(m, 0, step, 10, 100.0), Error);
  CHECK_THROWS_AS(dissipative_kernel_cache(m, 3, 0.0, 10, 100.0), Error);
}

TEST_CASE("coherent kernel is positive on site and tends to twice the potential") {
  const Model m = becimp::testing::preset_model("gate3d");
  for (double t : {0.1, 1.0, 5.0, 20.0}) CHECK(coherent_kernel(m, 0.0, t) > 0.0);
  for (double d : {0.0, 1.0, 2.0}) {
    CAPTURE(d);
    double avg = 0.0;
    const int n = 8;
    for (int i = 0; i < n; ++i) avg += coherent_kernel(m, d, 100.0 + 10.0 * i) / n;
    CHECK(relative(avg, 2.0 * mediated_potential(m, d)) < 1e-2);
  }
}

TEST_CASE("coherent kernel time average in one dimension") {
  const Model m = becimp::testing::preset_model("fig4");
  const double v = mediated_potential(m, 1.0);
  const double scale = m.healing_length / m.sound_speed;
  double avg = 0.0;
  const int n = 16;
  for (int i = 0; i < n; ++i) avg += coherent_kernel(m, 1.0, scale * (400.0 + 25.0 * i)) / n;
  CHECK(relative(avg, 2.0 * v) < 1e-2);
}

TEST_CASE("free hopping spreads as squared Bessel functions") {
  const Model m = free_model(0.0);
  const int sites = 81, start = 40;
  EvolveOptions o;
  o.sites = sites;
  o.t_end = 6.0 / m.hopping;
  o.samples = 7;
  const Trajectory tr = evolve(m, localized_state(sites, start), o, {}, nullptr, start);
  REQUIRE(tr.states.size() == 7);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const double x = 2.0 * m.hopping * tr.times[k];
    for (int j = 0; j < sites; ++j) {
      const double b = std::cyl_bessel_j(std::abs(j - start), x);
      CHECK(std::abs(tr.states[k](j, j).real() - b * b) < 1e-6);
    }
  }
  CHECK(tr.max_trace_drift < 1e-10);
  CHECK(tr.max_hermiticity_error < 1e-12);
}

TEST_CASE("tilted hopping matches exact diagonalisation and revives") {
  const Model m = free_model(0.05);
  const int sites = 31, start = 15;
  const double period = 2.0 * kPi / m.stark;
  EvolveOptions o;
  o.sites = sites;
  o.t_end = period;
  o.samples = 9;
  const Trajectory tr = evolve(m, localized_state(sites, start), o, {}, nullptr, start);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const Eigen::VectorXd p = exact_populations(sites, start, m.hopping, m.stark, tr.times[k]);
    for (int j = 0; j < sites; ++j) CHECK(std::abs(tr.states[k](j, j).real() - p(j)) < 1e-7);
    const double width = spread(tr.states[k], start);
    const double envelope = 4.0 * m.hopping * std::abs(std::sin(0.5 * m.stark * tr.times[k])) / m.stark;
    // The packet edge follows the envelope; its RMS width is envelope / sqrt(2).
    CHECK(std::abs(width * std::sqrt(2.0) - envelope) < 1e-5);
  }
  CHECK(tr.states.back()(start, start).real() > 0.999);
}

TEST_CASE("pure dephasing reproduces the two-site coherence factor") {
  Model m = becimp::testing::preset_model("fig4");
  m.hopping = 0.0;
  const int sites = 5;
  const double t_end = m.from_seconds(5e-4);
  DensityMatrix rho = DensityMatrix::Constant(sites, sites, 1.0 / sites);
  EvolveOptions o;
  o.sites = sites;
  o.t_end = t_end;
  o.samples = 3;
  o.temperature_nk = 100.0;
  const Trajectory tr = evolve(m, rho, o);
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const DensityMatrix& r = tr.states[k];
    for (int a = 0; a < sites; ++a) {
      CHECK(r(a, a).real() == doctest::Approx(1.0 / sites).epsilon(1e-12));
      for (int b = a + 1; b < sites; ++b) {
        const double expect = gamma_pair(m, b - a, tr.times[k], 100.0) / sites;
        CAPTURE(a);
        CAPTURE(b);
        CHECK(relative(std::abs(r(a, b)), expect) < 1e-6);
      }
    }
  }
}

TEST_CASE("dropping the bath term leaves coherent evolution") {
  const Model m = becimp::testing::preset_model("fig4");
  const int sites = 21, start = 10;
  EvolveOptions o;
  o.sites = sites;
  o.t_end = 2.0 / m.hopping;
  o.samples = 2;
  o.dissipative = false;
  const Trajectory a = evolve(m, localized_state(sites, start), o, {}, nullptr, start);
  const Trajectory b = evolve(free_model(0.0), localized_state(sites, start), o, {}, nullptr, start);
  CHECK((a.states.back() - b.states.back()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("evolve validates its inputs") {
  const Model m = free_model(0.0);
  EvolveOptions o;
  o.sites = 4;
  o.t_end = 1.0;
  CHECK_THROWS_AS(evolve(m, DensityMatrix::Zero(4, 3), o), Error);
  CHECK_THROWS_AS(evolve(m, localized_state(5, 0), o), Error);
  CHECK_THROWS_AS(evolve(m, DensityMatrix::Zero(4, 4), o), Error);
  DensityMatrix skew = localized_state(4, 0);
  skew(0, 1) = 0.3;
  CHECK_THROWS_AS(evolve(m, skew, o), Error);
  o.t_end = 0.0;
  CHECK_THROWS_AS(evolve(m, localized_state(4, 0), o), Error);
  CHECK_THROWS_AS(localized_state(4, 4), Error);
  CHECK_THROWS_AS(localized_state(4, -1), Error);
}

TEST_CASE("default time step") {
  const Model m = becimp::testing::preset_model("fig6");
  const double dt = default_time_step(m);
  CHECK(dt <= 0.005 / m.hopping);
  CHECK(dt <= 0.005 / std::abs(m.stark));
  CHECK(dt <= 0.01 * m.healing_length / m.sound_speed);
  CHECK((dt == doctest::Approx(0.005 / m.hopping) ||
         dt == doctest::Approx(0.005 / std::abs(m.stark)) ||
         dt == doctest::Approx(0.01 * m.healing_length / m.sound_speed)));
}

TEST_CASE("transport statistics") {
  SUBCASE("a localised state is flagged") {
    const TransportStats s = transport_stats(localized_state(9, 4), 4);
    CHECK_FALSE(s.defined);
    CHECK(s.sigma == 0.0);
  }
  SUBCASE("two-site split") {
    DensityMatrix r = DensityMatrix::Zero(9, 9);
    r(3, 3) = 0.5;
    r(5, 5) = 0.5;
    const TransportStats s = transport_stats(r, 4);
    CHECK(s.defined);
    CHECK(s.sigma == doctest::Approx(1.0));
    CHECK(s.mean_density == doctest::Approx(0.5));
    // Sites 3, 4, 5 lie in the window: deviations 0, 0.5, 0.
    CHECK(s.density_spread == doctest::Approx(0.125));
  }
  SUBCASE("uniform window has no spread") {
    DensityMatrix r = DensityMatrix::Zero(11, 11);
    for (int j = 3; j <= 7; ++j) r(j, j) = 0.2;
    const TransportStats s = transport_stats(r, 5);
    CHECK(s.sigma == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.mean_density == doctest::Approx(0.6 / (2.0 * std::sqrt(2.0))));
    CHECK(s.density_spread > 0.0);
  }
  DensityMatrix r = DensityMatrix::Zero(5, 5);
  r(1, 1) = 0.25;
  r(4, 4) = 0.75;
  CHECK(mean_position(r) == doctest::Approx(3.25));
  CHECK(spread(r, 0) == doctest::Approx(std::sqrt(0.25 + 0.75 * 16.0)));
}
