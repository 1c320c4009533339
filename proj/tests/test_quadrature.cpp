#include <doctest.h>

#include "near.hpp"

#include <cmath>

#include "covent/quadrature.hpp"

using namespace covent;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * std::pow(rule.x[i], 14);
  CHECK(sum == near(2.0 / 15.0, 1e-14));
}

TEST_CASE("Gauss-Hermite moments") {
  const auto rule = gauss_hermite(20);
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    m0 += rule.w[i];
    m2 += rule.w[i] * rule.x[i] * rule.x[i];
  }
  CHECK(m0 == near(std::sqrt(kPi), 1e-14));
  CHECK(m2 == near(std::sqrt(kPi) / 2.0, 1e-14));
}

TEST_CASE("angular_reduce small-k limit") {
  const SystemParams p;
  CHECK(angular_reduce(p, 1e-8).value == near(4.18879, 1e-6));
  CHECK(angular_reduce(p, 1e-8).value == near(4.0 * kPi / 3.0, 1e-12));
}

TEST_CASE("angular_reduce without geometry is 4 pi / 3") {
  // d and L cannot be zero in a valid parameter set; at 1e-12 both factors
  // are 1 to double precision for every k used here.
  SystemParams p;
  p.dipole_d = 1e-12;
  p.separation_l = 1e-12;
  for (double k : {0.1, 1.0, 50.0}) {
    CHECK(angular_reduce(p, k).value == near(4.0 * kPi / 3.0, 1e-14));
  }
}

TEST_CASE("angular_reduce against a closed form at d -> 0") {
  // 2 pi Int u^2 cos(a u) du = 4 pi [sin a / a + 2 cos a / a^2 - 2 sin a / a^3]
  SystemParams p;
  p.dipole_d = 1e-12;
  for (double k : {0.3, 1.7, 25.0}) {
    const double a = k * p.separation_l;
    const double expected =
        4.0 * kPi * (std::sin(a) / a + 2.0 * std::cos(a) / (a * a) - 2.0 * std::sin(a) / (a * a * a));
    CHECK(angular_reduce(p, k).value == near(expected, 1e-12));
  }
}

TEST_CASE("pv_radial of a symmetric pole") {
  const auto one = [](double) { return 1.0; };
  CHECK(std::abs(pv_radial(one, 1.0, 0.0, 2.0).value) < 1e-13);
  CHECK(pv_radial(one, 1.0, 0.0, 3.0).value == near(-std::log(2.0), 1e-12));
  CHECK(pv_radial(one, 1.0, 0.0, 3.0).discarded_imag == near(-kPi));
}

TEST_CASE("pv_radial reduces to plain quadrature when the pole cancels") {
  const auto g = [](double k) { return std::exp(-k) * std::cos(3.0 * k); };
  const auto plain = integrate_smooth(g, 0.0, 4.0);
  const auto pv = pv_radial([&](double k) { return (1.5 - k) * g(k); }, 1.5, 0.0, 4.0);
  CHECK(pv.value == near(plain.value, 1e-12));
}

TEST_CASE("pv_radial rejects a pole on the boundary") {
  const auto one = [](double) { return 1.0; };
  CHECK_THROWS_AS(pv_radial(one, 0.0, 0.0, 2.0), ValidationError);
  CHECK_THROWS_AS(pv_radial(one, 2.0, 0.0, 2.0), ValidationError);
}

TEST_CASE("integrate_smooth") {
  const auto r = integrate_smooth([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(r.value == near(2.0, 1e-14));
  CHECK(r.error < 1e-12);
  QuadratureConfig impossible;
  impossible.rel_tol = 1e-30;
  CHECK_THROWS_AS(epsilon_coulomb(SystemParams{}, impossible), ConvergenceError);
}

TEST_CASE("epsilon_coulomb matches the closed form within 1%") {
  const SystemParams p;
  const auto eps = epsilon_coulomb(p);
  CHECK(epsilon_coulomb_closed_form(p) == near(7.9577e-4, 1e-4));
  CHECK(std::abs(eps.value / epsilon_coulomb_closed_form(p) - 1.0) < 0.01);
  CHECK(eps.value == near(7.9673108e-4, 1e-8));
}

TEST_CASE("underlying integral against an independent radial form") {
  // Int d^3k (k_x d)^2 / k^2 cos(k_x L) exp(-(k_x d)^2) up to |k| < K equals
  // 4 pi d^2 Int_0^K v^2 exp(-(d v)^2) cos(L v) ln(K / v) dv (angular and
  // radial integrations exchanged).
  const SystemParams p;
  const double d = p.dipole(), l = p.separation_l;
  const KSpaceIntegrator integrator(p, {});
  const double kmax = integrator.cutoff();
  QuadratureConfig fine;
  fine.rel_tol = 1e-12;
  const auto swapped = integrate_smooth(
      [&](double v) {
        return v > 0.0 ? v * v * std::exp(-d * d * v * v) * std::cos(l * v) * std::log(kmax / v)
                       : 0.0;
      },
      0.0, kmax, fine);
  const double oracle = 4.0 * kPi * d * d * swapped.value;
  const double direct = d * d * integrator.integrate({[](double) { return 1.0; }, {}}).value;
  CHECK(direct == near(oracle, 1e-8));
  CHECK(oracle == near(-4.0 * kPi * kPi * d * d / (l * l * l), 0.015));
  CHECK(-4.0 * kPi * kPi * d * d / (l * l * l) == near(-1.9739e-3, 1e-4));
}

TEST_CASE("epsilon_coulomb scales as 1 / L^3") {
  SystemParams p, q;
  q.separation_l = 2.0 * p.separation_l;
  CHECK(epsilon_coulomb(p).value / epsilon_coulomb(q).value == near(8.0, 0.01));
}

TEST_CASE("epsilon_lorentz at default parameters") {
  const SystemParams p;
  const KSpaceIntegrator integrator(p, {});
  const auto l = epsilon_lorentz(integrator);
  CHECK(l.value == near(7.8599756e-4, 1e-8));
  CHECK(l.discarded_imag != 0.0);
  CHECK(l.error < 1e-8 * std::abs(l.value));
}

TEST_CASE("ratio is nearly independent of d") {
  // The series carries no d; finite d enters at order (d/L)^2.
  double ratio[3];
  const double ds[3] = {0.01, 0.02, 0.04};
  for (int i = 0; i < 3; ++i) {
    SystemParams p;
    p.dipole_d = ds[i];
    const KSpaceIntegrator integrator(p, {});
    ratio[i] = epsilon_lorentz(integrator).value / epsilon_coulomb(integrator).value;
  }
  CHECK(std::abs(ratio[2] - ratio[0]) < 1e-4);
  const double step1 = ratio[1] - ratio[0], step2 = ratio[2] - ratio[1];
  CHECK(step2 / step1 == near(4.0, 0.05));
}

TEST_CASE("coefficient c0") {
  const auto s = series_coefficients(SystemParams{});
  CHECK(s.c0.value == near(1.0, 0.005));
}

TEST_CASE("halving the node spacing stays within the error estimate") {
  const SystemParams p;
  QuadratureConfig base, fine;
  fine.radial_nodes = 2 * base.radial_nodes;
  fine.angular_nodes = 2 * base.angular_nodes;
  const auto a = epsilon_lorentz(p, base), b = epsilon_lorentz(p, fine);
  CHECK(std::abs(a.value - b.value) <= a.error + b.error);
  const auto c = epsilon_coulomb(p, base), e = epsilon_coulomb(p, fine);
  CHECK(std::abs(c.value - e.value) <= c.error + e.error);
}

TEST_CASE("invalid quadrature settings") {
  QuadratureConfig c;
  c.radial_nodes = 0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = {};
  c.kmax_over_invd = 0.01;
  CHECK_THROWS_AS(KSpaceIntegrator(SystemParams{}, c), ValidationError);
}

TEST_CASE("c1 approaches -1/(2 pi) when L is far inside one wavelength") {
  // omega_A L = 0.02; the closed-form coefficient is recovered in this limit.
  SystemParams p;
  p.separation_l = 0.02;
  p.dipole_d = 0.0002;
  const auto s = series_coefficients(p);
  CHECK(s.c1.value == near(kSeriesC1, 0.03));
}
