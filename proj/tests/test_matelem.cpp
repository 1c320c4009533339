#include <doctest.h>

#include "near.hpp"

#include <cmath>

#include "covent/matelem.hpp"

using namespace covent;

namespace {

const Complex kI{0.0, 1.0};
const double kTwoPi32 = std::pow(2.0 * kPi, 1.5);

SystemParams with_d(double d) {
  SystemParams p;
  p.dipole_d = d;
  return p;
}

}  // namespace

TEST_CASE("scalar emission carries (-i k d) exp(-(k d)^2 / 2)") {
  const auto p = with_d(0.1);
  const Vec3 k{1.0, 0.0, 0.0};
  const Complex factor = scalar_emission(p, Oscillator::A, k) / (p.charge_q * mode_normalization(k));
  CHECK(std::abs(factor.real()) < 1e-15);
  CHECK(factor.imag() == near(-0.0995012, 1e-6));
}

TEST_CASE("elements vanish for k perpendicular to the dipole") {
  const SystemParams p;
  const Vec3 k{0.0, 1.3, -0.4};
  for (auto osc : {Oscillator::A, Oscillator::B}) {
    CHECK(std::abs(scalar_emission(p, osc, k)) == 0.0);
    CHECK(std::abs(scalar_absorption(p, osc, k)) == 0.0);
    CHECK(std::abs(longitudinal_emission(p, osc, k)) == 0.0);
    CHECK(std::abs(longitudinal_absorption(p, osc, k)) == 0.0);
    CHECK(std::abs(rho_fourier_element(p, osc, +1, k)) == 0.0);
    CHECK(std::abs(rho_fourier_element(p, osc, -1, k)) == 0.0);
  }
}

TEST_CASE("reflecting k conjugates the emission element") {
  const SystemParams p;
  const Vec3 k{0.8, 0.3, -0.2}, mk{-0.8, -0.3, 0.2};
  for (auto osc : {Oscillator::A, Oscillator::B}) {
    CHECK(std::abs(scalar_emission(p, osc, mk) - std::conj(scalar_emission(p, osc, k))) < 1e-18);
  }
}

TEST_CASE("absorption over emission is exp(2 i k.r0)") {
  const SystemParams p;
  const Vec3 k{0.8, 0.3, -0.2};
  const Complex ratio =
      scalar_absorption(p, Oscillator::B, k) / scalar_emission(p, Oscillator::B, k);
  const Complex expected = std::exp(2.0 * kI * k[0] * p.separation_l);
  CHECK(std::abs(ratio - expected) < 1e-14);
  CHECK(std::abs(scalar_absorption(p, Oscillator::A, k) / scalar_emission(p, Oscillator::A, k) -
                 1.0) < 1e-14);
}

TEST_CASE("longitudinal over scalar emission is -omega_A / omega") {
  const SystemParams p;
  const Vec3 on_shell{0.6, 0.8, 0.0};  // |k| = 1 = omega_A
  CHECK(std::abs(longitudinal_emission(p, Oscillator::A, on_shell) /
                     scalar_emission(p, Oscillator::A, on_shell) +
                 1.0) < 1e-15);
  const Vec3 twice{1.2, 1.6, 0.0};
  CHECK(std::abs(longitudinal_emission(p, Oscillator::A, twice) /
                     scalar_emission(p, Oscillator::A, twice) +
                 0.5) < 1e-15);
}

TEST_CASE("k = 0 is rejected") {
  const SystemParams p;
  CHECK_THROWS_AS(scalar_emission(p, Oscillator::A, {0.0, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(rho_fourier_element(p, Oscillator::A, 2, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("transition_element dispatch") {
  const SystemParams p;
  const Vec3 k{0.4, 0.1, 0.2};
  const auto e = transition_element(p, Oscillator::B, Process::long_absorb, k);
  CHECK(e.value == longitudinal_absorption(p, Oscillator::B, k));
}

TEST_CASE("form factor oracle") {
  SystemParams p;
  p.dipole_d.reset();
  p.mass_m = 1.0;
  const auto r = form_factor_oracle(p, Oscillator::A, 1.0);
  CHECK(std::abs(r.value.real()) < 1e-14);
  CHECK(r.value.imag() == near(-0.5506953, 1e-7));
  CHECK(std::abs(form_factor_oracle(p, Oscillator::A, 0.0).value) < 1e-14);
}

TEST_CASE("form factor oracle agrees with the closed form") {
  const SystemParams p;
  for (double kd : {1e-3, 0.05, 0.7, 2.9}) {
    const Vec3 k{kd / p.dipole(), 0.0, 0.0};
    const Complex closed = -kI * kd * form_factor(p, k);
    for (auto osc : {Oscillator::A, Oscillator::B}) {
      CHECK(std::abs(form_factor_oracle(p, osc, k[0]).value - closed) / std::abs(closed) < 1e-8);
    }
  }
}

TEST_CASE("displacement matrix") {
  const auto id = displacement_matrix(0.0, 0.3, 4);
  CHECK((id - OscillatorMatrix::Identity(5, 5)).norm() == 0.0);

  const double kappa = 2.0, d = 0.1, x = kappa * d;
  const auto D = displacement_matrix(kappa, d, 3);
  CHECK(std::abs(D(1, 0) - kI * x * std::exp(-0.5 * x * x)) < 1e-15);
  CHECK(std::abs(D(0, 1) - kI * x * std::exp(-0.5 * x * x)) < 1e-15);
  CHECK(std::abs(D(1, 1) - (1.0 - x * x) * std::exp(-0.5 * x * x)) < 1e-15);

  // Columns of the untruncated operator are unit vectors.
  const auto big = displacement_matrix(5.0, 0.2, 40);
  CHECK(big.col(0).norm() == near(1.0, 1e-13));
  CHECK(big.col(2).norm() == near(1.0, 1e-13));
  CHECK((big.topRows(10) * big.topRows(10).adjoint() - OscillatorMatrix::Identity(10, 10)).norm() <
        1e-12);
}

TEST_CASE("rho matrix reproduces the transition elements") {
  const SystemParams p;
  const Vec3 k{3.0, -1.0, 2.0}, mk{-3.0, 1.0, -2.0};
  for (auto osc : {Oscillator::A, Oscillator::B}) {
    const auto rho = rho_matrix(p, osc, k, 2);
    const auto rho_m = rho_matrix(p, osc, mk, 2);
    CHECK(std::abs(rho(0, 1) - rho_fourier_element(p, osc, +1, k)) < 1e-18);
    CHECK(std::abs(rho_m(1, 0) - rho_fourier_element(p, osc, -1, k)) < 1e-18);
    // neutral oscillator: no coupling without a transition at k -> 0
    CHECK(std::abs(rho_matrix(p, osc, {1e-9, 0.0, 0.0}, 2)(0, 0)) < 1e-18);
    CHECK(std::abs(kTwoPi32 * mode_normalization(k) * rho(0, 1) - scalar_emission(p, osc, k)) <
          1e-18);
  }
}

TEST_CASE("longitudinal matrices reproduce the transition elements") {
  const SystemParams p;
  const Vec3 k{3.0, -1.0, 2.0};
  for (auto osc : {Oscillator::A, Oscillator::B}) {
    const auto cre = longitudinal_creation_matrix(p, osc, k, 2);
    const auto ann = longitudinal_annihilation_matrix(p, osc, k, 2);
    CHECK(std::abs(cre(0, 1) - longitudinal_emission(p, osc, k)) < 1e-18);
    CHECK(std::abs(ann(1, 0) - longitudinal_absorption(p, osc, k)) < 1e-18);
    CHECK(std::abs(cre(1, 1)) == 0.0);
  }
}
