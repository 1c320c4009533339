#include <doctest.h>

#include "near.hpp"

#include <cmath>

#include "covent/fock.hpp"

using namespace covent;

namespace {

Registry three_modes(Truncation t = {}) {
  const Vec3 k{1.0, 0.5, 0.0};
  return ModeRegistry::make({{k, PolarizationKind::transverse1},
                             {k, PolarizationKind::longitudinal},
                             {k, PolarizationKind::scalar}},
                            t);
}

constexpr std::size_t T = 0, L = 1, S = 2;

OccupationState photons(std::uint8_t t, std::uint8_t l, std::uint8_t s) {
  return {0, 0, {t, l, s}};
}

}  // namespace

TEST_CASE("create on the vacuum") {
  const auto reg = three_modes();
  const auto one = create(StateVector::vacuum(reg), S);
  REQUIRE(one.size() == 1);
  CHECK(one[photons(0, 0, 1)] == std::complex<double>(1.0));
}

TEST_CASE("create twice gives sqrt(2)|2>") {
  const auto reg = three_modes();
  const auto two = create(create(StateVector::vacuum(reg), L), L);
  CHECK(std::abs(two[photons(0, 2, 0)] - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("create at the truncation") {
  const auto reg = three_modes();
  const auto two = create(create(StateVector::vacuum(reg), T), T);
  CHECK_THROWS_AS(create(two, T), TruncationError);
  CHECK(create(two, T, OnOverflow::project).empty());
  // total photon cap
  const auto mixed = create(create(StateVector::vacuum(reg), T), L);
  CHECK_THROWS_AS(create(mixed, S), TruncationError);
}

TEST_CASE("annihilate") {
  const auto reg = three_modes();
  const auto vac = StateVector::vacuum(reg);
  const auto back = annihilate(create(vac, T), T);
  CHECK(ordinary_norm(back - vac) == 0.0);
  CHECK(annihilate(vac, T).empty());
}

TEST_CASE("mode index out of range") {
  const auto reg = three_modes();
  CHECK_THROWS(create(StateVector::vacuum(reg), 3));
}

TEST_CASE("indefinite inner product of scalar number states") {
  const auto reg = three_modes();
  const auto vac = StateVector::vacuum(reg);
  CHECK(indefinite_inner(vac, vac) == std::complex<double>(1.0));
  const auto one = StateVector::basis(reg, photons(0, 0, 1));
  CHECK(indefinite_inner(one, one) == std::complex<double>(-1.0));
  const auto two = StateVector::basis(reg, photons(0, 0, 2));
  CHECK(indefinite_inner(two, two) == std::complex<double>(1.0));
  const auto lng = StateVector::basis(reg, photons(0, 1, 0));
  CHECK(indefinite_inner(lng, lng) == std::complex<double>(1.0));
}

TEST_CASE("scalar sector identity") {
  const auto reg = three_modes();
  const auto vac = StateVector::vacuum(reg);
  const auto once = apply_scalar_sector_identity(vac, S);
  CHECK(ordinary_norm(once + vac) == 0.0);
  CHECK(ordinary_norm(apply_scalar_sector_identity(once, S) - vac) == 0.0);
  CHECK(ordinary_norm(annihilate(create(vac, L), L) - vac) == 0.0);
  CHECK_THROWS(apply_scalar_sector_identity(vac, L));
}

TEST_CASE("corrupted metric flips the scalar identity") {
  const auto reg = three_modes();
  const auto vac = StateVector::vacuum(reg);
  const auto once = apply_scalar_sector_identity(vac, S, Metric::corrupted());
  CHECK(ordinary_norm(once - vac) == 0.0);
}

TEST_CASE("metric_create is -create on scalar modes only") {
  const auto reg = three_modes();
  const auto vac = StateVector::vacuum(reg);
  CHECK(ordinary_norm(metric_create(vac, S) + create(vac, S)) == 0.0);
  CHECK(ordinary_norm(metric_create(vac, L) - create(vac, L)) == 0.0);
}

TEST_CASE("subsidiary condition") {
  const auto reg = three_modes();
  const auto vac = StateVector::vacuum(reg);
  CHECK(check_subsidiary(vac, L, S) == 0.0);
  CHECK(check_subsidiary(create(vac, L) - metric_create(vac, S), L, S) == 0.0);
  CHECK(check_subsidiary(create(vac, L), L, S) == near(1.0, 1e-15));
  CHECK(check_subsidiary(create(vac, L) + metric_create(vac, S), L, S) > 1.0);
  CHECK_THROWS(check_subsidiary(vac, L, T));
}

TEST_CASE("oscillator ladder") {
  const auto reg = three_modes();
  const auto up = raise_oscillator(StateVector::vacuum(reg, 1, 0), Oscillator::A);
  CHECK(std::abs(up[{2, 0, {0, 0, 0}}] - std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(raise_oscillator(up, Oscillator::A), TruncationError);
  CHECK(lower_oscillator(StateVector::vacuum(reg), Oscillator::B).empty());
}

TEST_CASE("states from different registries do not mix") {
  const auto a = three_modes(), b = three_modes();
  CHECK_THROWS_AS(StateVector::vacuum(a) + StateVector::vacuum(b), RegistryMismatch);
}

TEST_CASE("registry lookup") {
  const auto reg = three_modes();
  CHECK(reg->find({1.0, 0.5, 0.0}, PolarizationKind::scalar) == S);
  CHECK_FALSE(reg->find({1.0, 0.5, 0.1}, PolarizationKind::scalar).has_value());
}
