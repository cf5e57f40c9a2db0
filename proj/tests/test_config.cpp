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

#include <cstdio>
#include <fstream>
#include <string>

#include "becimp/config.hpp"
#include "becimp/error.hpp"

using namespace becimp;

TEST_CASE("every preset builds a model") {
  for (const auto& name : Config::preset_names()) {
    CAPTURE(name);
    const Config c = Config::preset(name);
    CHECK(c.get("preset") == name);
    CHECK_NOTHROW(build_model(c));
    CHECK_NOTHROW(build_grid_spec(c));
  }
  CHECK_THROWS_AS(Config::preset("fig9"), Error);
}

TEST_CASE("preset values") {
  const Model gate = build_model(Config::preset("gate3d"));
  CHECK(gate.dimension == 3);
  CHECK(gate.bec.density == doctest::Approx(1.25e20));
  CHECK(gate.bec.boson_mass_kg == doctest::Approx(species::kSodium23));
  const Model fig5 = build_model(Config::preset("fig5"));
  CHECK(fig5.dimension == 2);
  CHECK(fig5.lattice.site_count == 50);
  const Model fig6 = build_model(Config::preset("fig6"));
  // Tilt of hbar * 1.5e3 / s.
  CHECK(fig6.stark / fig6.time_unit_s == doctest::Approx(1.5e3).epsilon(1e-12));
}

TEST_CASE("unknown keys list the valid keys") {
  Config c;
  try {
    c.set("bec.densty", "1");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    const std::string what = e.what();
    CHECK(what.find("bec.densty") != std::string::npos);
    CHECK(what.find("bec.density") != std::string::npos);
  }
}

TEST_CASE("key = value text with a preset applied first") {
  const Config c = Config::parse(
      "# comment\ncoupling.kappa = 0.02\npreset = fig2\nbec.temperature_nK=7 # trailing\n");
  CHECK(c.get("preset") == "fig2");
  CHECK(c.number("coupling.kappa") == doctest::Approx(0.02));
  CHECK(c.number("bec.temperature_nK") == doctest::Approx(7.0));
  CHECK(c.number("lattice.depth") == doctest::Approx(40.0));
  CHECK_THROWS_AS(Config::parse("no equals sign"), Error);
}

TEST_CASE("JSON config is flattened") {
  const Config c = Config::parse(
      R"({"preset": "fig5", "mc": {"seeds": 3, "temperatures_nK": [1.5, 2.5]}})");
  CHECK(c.integer("mc.seeds") == 3);
  const auto t = c.numbers("mc.temperatures_nK");
  REQUIRE(t.size() == 2);
  CHECK(t[1] == doctest::Approx(2.5));
  CHECK(c.integer("bec.dimension") == 2);
  CHECK_THROWS_AS(Config::parse("{bad json"), Error);
}

TEST_CASE("typed accessors reject malformed values") {
  Config c;
  c.set("bec.density", "abc");
  CHECK_THROWS_AS(c.number("bec.density"), Error);
  c.set("scan.long_time", "maybe");
  CHECK_THROWS_AS(c.flag("scan.long_time"), Error);
  c.set("scan.long_time", "true");
  CHECK(c.flag("scan.long_time"));
}

TEST_CASE("load reads files and reports missing ones") {
  const std::string path = "becimp_config_test.cfg";
  {
    std::ofstream out(path);
    out << "preset = gate3d\n";
  }
  CHECK(Config::load(path).get("preset") == "gate3d");
  std::remove(path.c_str());
  try {
    Config::load("/nonexistent/file.cfg");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("grid spec keys") {
  Config c;
  c.set("grid.mode", "finite");
  c.set("grid.order", "30");
  const GridSpec s = build_grid_spec(c);
  CHECK(s.mode == GridMode::kFinite);
  CHECK(s.order == 30);
  c.set("grid.mode", "other");
  CHECK_THROWS_AS(build_grid_spec(c), Error);
}
