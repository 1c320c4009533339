#include <doctest.h>

#include "near.hpp"

#include <cmath>
#include <limits>

#include "covent/core.hpp"

using namespace covent;

TEST_CASE("derive_dipole") {
  CHECK(derive_dipole(1.0, 1.0) == near(0.7071067812, 1e-10));
  CHECK(derive_dipole(1.0, 0.5) == near(1.0, 1e-15));
  CHECK(derive_dipole(2.0, 1.0) == near(0.5, 1e-15));
  CHECK_THROWS_AS(derive_dipole(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(derive_dipole(1.0, -1.0), ValidationError);
}

TEST_CASE("dipole from mass uses omega_A") {
  SystemParams p;
  p.dipole_d.reset();
  p.mass_m = 2.0;
  CHECK(p.dipole() == near(0.5));
  CHECK(p.mass(Oscillator::A) == near(2.0));
}

TEST_CASE("validate: default parameters are clean") {
  SystemParams p;
  CHECK(validate(p).empty());
}

TEST_CASE("validate: equal frequencies are a hard error") {
  SystemParams p;
  p.omega_b = 1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p.omega_b = 0.9;
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("validate: large dipole warns") {
  SystemParams p;
  p.dipole_d = 0.5;
  const auto diagnostics = validate(p);
  REQUIRE(diagnostics.size() == 1);
  CHECK(diagnostics[0].severity == Severity::warning);
  CHECK(diagnostics[0].message.find("d/L = 0.25") != std::string::npos);
}

TEST_CASE("validate: non-finite and non-positive inputs") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SystemParams p;
  p.separation_l = 0.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = {};
  p.omega_a = nan;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = {};
  p.dipole_d = -0.1;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = {};
  p.dipole_d.reset();
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("derived frequencies") {
  SystemParams p;
  CHECK(p.delta_e() == near(0.01));
  CHECK(p.omega_l() == near(0.5));
  CHECK(p.center(Oscillator::B) == 2.0);
}
