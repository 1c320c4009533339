#include "covent/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace covent {

namespace {

void require_off_pole(const SystemParams& params, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("omega_gamma must be positive and finite");
  }
  if (std::abs(params.omega_a - omega) <= 1e-14 * params.omega_a) {
    throw ResonanceError("omega_gamma = omega_A: pole of the a9 bracket");
  }
}

Vec3 reflect(const Vec3& k) { return {-k[0], -k[1], -k[2]}; }

}  // namespace

TransformBrackets transform_brackets(const SystemParams& params, double omega) {
  require_off_pole(params, omega);
  const double wa = params.omega_a, wb = params.omega_b;
  const double half = params.delta_e() / (2.0 * omega);
  return {1.0, half * (wa / (wa - omega) + wb / (wb + omega)), -half};
}

double PerKReport::relative_residual() const noexcept {
  const double scale = std::max(std::abs(bracket_lorentz),
                                std::abs(bracket_a1) + std::abs(bracket_a9) + std::abs(bracket_a11));
  return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual);
}

PerKReport per_k_equivalence(const SystemParams& params, double omega) {
  const auto t = transform_brackets(params, omega);
  PerKReport report;
  report.omega_gamma = omega;
  report.bracket_lorentz = lorentz_bracket(params, omega);
  report.bracket_a1 = t.a1;
  report.bracket_a9 = t.a9;
  report.bracket_a11 = t.a11;
  report.residual = report.bracket_lorentz - t.sum();
  return report;
}

IntegralResult transformed_epsilon(const KSpaceIntegrator& integrator, TermSelection terms) {
  const auto& params = integrator.params();
  const double wa = params.omega_a, wb = params.omega_b, de = params.delta_e();
  RadialBracket bracket;
  bracket.regular = [=](double k) {
    double value = 0.0;
    if (terms.a1) value += 1.0;
    if (terms.a9) value += de * wb / (2.0 * k * (wb + k));
    if (terms.a11) value -= de / (2.0 * k);
    return value;
  };
  if (terms.a9) bracket.pole_numerator = [=](double k) { return de * wa / (2.0 * k); };
  return to_amplitude(integrator, integrator.integrate(bracket), "transformed_epsilon");
}

IntegralResult transformed_epsilon(const SystemParams& params, const QuadratureConfig& config,
                                   TermSelection terms) {
  return transformed_epsilon(KSpaceIntegrator(params, config), terms);
}

Registry pair_registry(const Vec3& k, bool with_reflection) {
  std::vector<PhotonMode> modes{{k, PolarizationKind::longitudinal, 1.0},
                                {k, PolarizationKind::scalar, 1.0}};
  if (with_reflection) {
    modes.push_back({reflect(k), PolarizationKind::longitudinal, 1.0});
    modes.push_back({reflect(k), PolarizationKind::scalar, 1.0});
  }
  return ModeRegistry::make(std::move(modes), Truncation{2, 2, 2});
}

namespace {

struct PairIndex {
  std::size_t longitudinal;
  std::size_t scalar;
};

PairIndex find_pair(const ModeRegistry& registry, const Vec3& k) {
  const auto l = registry.find(k, PolarizationKind::longitudinal);
  const auto s = registry.find(k, PolarizationKind::scalar);
  if (!l || !s) throw std::invalid_argument("registry lacks the (longitudinal, scalar) pair at k");
  return {*l, *s};
}

// j_l(k) (a_l^+ -+ a_s^+) + j_l(-k) (a_l - a_s) at one pair.
StateVector apply_pair_coupling(const SystemParams& params, const Vec3& k, const PairIndex& pair,
                                const StateVector& state, PairCoupling coupling,
                                OnOverflow overflow) {
  const auto& registry = state.registry();
  const int n_max = registry->truncation().n_max;
  const double sign = coupling == PairCoupling::physical ? -1.0 : 1.0;
  const StateVector raised = create(state, pair.longitudinal, overflow) +
                             sign * metric_create(state, pair.scalar, {}, overflow);
  const StateVector lowered = annihilate(state, pair.longitudinal) - annihilate(state, pair.scalar);
  StateVector out(registry);
  for (auto osc : {Oscillator::A, Oscillator::B}) {
    out += apply_oscillator(raised, osc, longitudinal_creation_matrix(params, osc, k, n_max));
    out += apply_oscillator(lowered, osc, longitudinal_annihilation_matrix(params, osc, k, n_max));
  }
  return out;
}

double energy(const SystemParams& params, const ModeRegistry& registry,
              const OccupationState& state) {
  double e = params.omega_a * state.level_a + params.omega_b * state.level_b;
  for (std::size_t i = 0; i < state.photons.size(); ++i) {
    e += registry.mode(i).omega() * state.photons[i];
  }
  return e;
}

// (T^-1)^(1): sum over modes of (N / omega) [rho(-k) a_s(k) - rho(k) a_s^+(k)].
StateVector apply_first_order_transform(const SystemParams& params, const StateVector& state) {
  const auto& registry = *state.registry();
  const int n_max = registry.truncation().n_max;
  StateVector out(state.registry());
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const auto& mode = registry.mode(i);
    if (mode.kind != PolarizationKind::scalar) continue;
    const Vec3& k = mode.k_vector;
    const double factor =
        std::sqrt(mode.weight) * mode_normalization(k) * std::pow(2.0 * kPi, 1.5) / mode.omega();
    const StateVector lowered = annihilate(state, i);
    const StateVector raised = metric_create(state, i, {}, OnOverflow::project);
    for (auto osc : {Oscillator::A, Oscillator::B}) {
      if (!lowered.empty()) {
        out += factor * apply_oscillator(lowered, osc, rho_matrix(params, osc, reflect(k), n_max));
      }
      if (!raised.empty()) {
        out -= factor * apply_oscillator(raised, osc, rho_matrix(params, osc, k, n_max));
      }
    }
  }
  return out;
}

}  // namespace

TransformBrackets operator_route_brackets(const SystemParams& params, const Vec3& k,
                                          PairCoupling coupling) {
  validate(params);
  const double w = norm(k);
  const double kd = k[0] * params.dipole();
  const double phase = std::cos(k[0] * params.separation_l);
  if (!(w > 0.0)) throw ValidationError("operator_route_brackets: k = 0");
  if (std::abs(phase) < 1e-3) {
    throw ValidationError("operator_route_brackets: cos(k_x L) too close to zero to normalize");
  }
  if (kd == 0.0) throw ValidationError("operator_route_brackets: k_x d = 0");

  const Registry registry = pair_registry(k, true);
  const OccupationState n = initial_state(*registry);
  const OccupationState m = target_state(*registry);
  const StateVector psi0 = StateVector::basis(registry, n);
  const double e_n = energy(params, *registry, n);

  // First-order state from the residual coupling alone.
  StateVector coupled(registry);
  for (const Vec3& kv : {k, reflect(k)}) {
    coupled += apply_pair_coupling(params, kv, find_pair(*registry, kv), psi0, coupling,
                                   OnOverflow::project);
  }
  StateVector psi1(registry);
  for (const auto& [l, amp] : coupled) {
    const double gap = e_n - energy(params, *registry, l);
    if (std::abs(gap) <= 1e-12 * std::max(1.0, e_n)) {
      throw ResonanceError("operator_route_brackets: intermediate photon on shell");
    }
    psi1.add(l, amp / gap);
  }

  const Complex a9 = apply_first_order_transform(params, psi1)[m];
  const Complex a11 =
      0.5 * apply_first_order_transform(params, apply_first_order_transform(params, psi0))[m];
  const Complex a1 = (coulomb_matrix_element(params, k) + coulomb_matrix_element(params, reflect(k))) /
                     (e_n - energy(params, *registry, m));

  const double normalization = 2.0 * (-params.charge_q * params.charge_q /
                                      (params.delta_e() * std::pow(2.0 * kPi, 3))) *
                               (kd * kd) / (w * w) * phase * std::exp(-kd * kd);
  return {a1.real() / normalization, a9.real() / normalization, a11.real() / normalization};
}

double residual_term_physicality(const SystemParams& params, const Vec3& k,
                                 const StateVector& state, PairCoupling coupling) {
  const auto pair = find_pair(*state.registry(), k);
  const StateVector out = apply_pair_coupling(params, k, pair, state, coupling, OnOverflow::raise);
  return check_subsidiary(out, pair.longitudinal, pair.scalar);
}

}  // namespace covent
