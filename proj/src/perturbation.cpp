#include "covent/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace covent {

namespace {

constexpr Complex kI{0.0, 1.0};

double omega_of(const Vec3& k) {
  const double w = norm(k);
  if (!(w > 0.0)) throw ValidationError("photon wave vector k = 0 (omega = 0 is singular)");
  return w;
}

void require_positive_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("omega_gamma must be positive and finite");
  }
}

void require_off_pole(const SystemParams& params, double omega) {
  if (std::abs(params.omega_a - omega) <= 1e-14 * params.omega_a) {
    throw ResonanceError("omega_gamma = omega_A: pole of the type I denominator");
  }
}

std::string describe_mode(const ModeRegistry& registry, std::size_t index) {
  const auto& m = registry.mode(index);
  std::ostringstream os;
  os << "mode " << index << " (" << to_string(m.kind) << ", k = (" << m.k_vector[0] << ", "
     << m.k_vector[1] << ", " << m.k_vector[2] << "), omega = " << m.omega() << ")";
  return os.str();
}

}  // namespace

std::string to_string(const DiagramSpec& spec) {
  return std::string(spec.order == OrderType::typeI ? "typeI" : "typeII") + "-" +
         to_string(spec.kind);
}

double common_prefactor(const SystemParams& params) {
  return params.charge_q * params.charge_q / (2.0 * params.delta_e() * std::pow(2.0 * kPi, 3));
}

Complex diagram_integrand(const SystemParams& params, const DiagramSpec& spec, const Vec3& k) {
  if (spec.kind != PolarizationKind::scalar && spec.kind != PolarizationKind::longitudinal) {
    throw std::invalid_argument("diagram_integrand: only scalar and longitudinal diagrams");
  }
  const double w = omega_of(k);
  const double kd = k[0] * params.dipole();
  const double l = params.separation_l;
  const double base = kd * kd / w * std::exp(-kd * kd);
  Complex value;
  if (spec.order == OrderType::typeI) {
    if (params.eta == 0.0) require_off_pole(params, w);
    value = base * std::exp(kI * k[0] * l) / Complex(params.omega_a - w, params.eta);
  } else {
    value = base * std::exp(-kI * k[0] * l) / Complex(-params.omega_b - w, params.eta);
  }
  if (spec.kind == PolarizationKind::longitudinal) {
    value *= -params.omega_a * params.omega_b / (w * w);
  }
  return value;
}

double lorentz_bracket(const SystemParams& params, double omega) {
  require_positive_omega(omega);
  require_off_pole(params, omega);
  const double wa = params.omega_a, wb = params.omega_b;
  return 0.5 * ((wa * wb - omega * omega) / omega) * (1.0 / (wa - omega) - 1.0 / (wb + omega));
}

double expansion_term(const SystemParams& params, double omega, int order) {
  require_positive_omega(omega);
  const double wa = params.omega_a, de = params.delta_e();
  switch (order) {
    case 0: return 1.0;
    case 1:
      require_off_pole(params, omega);
      return 0.5 * (wa * wa + omega * omega) / (omega * (wa + omega) * (wa - omega)) * de;
    case 2: return 0.5 * de * de / ((wa + omega) * (wa + omega));
    default: throw ValidationError("expansion_term: order must be 0, 1 or 2");
  }
}

double coulomb_integrand(const SystemParams& params, const Vec3& k) {
  const double w = omega_of(k);
  const double kd = k[0] * params.dipole();
  return -params.charge_q * params.charge_q / (params.delta_e() * std::pow(2.0 * kPi, 3)) *
         (kd * kd) / (w * w) * std::cos(k[0] * params.separation_l) * std::exp(-kd * kd);
}

Complex coulomb_matrix_element(const SystemParams& params, const Vec3& k) {
  const double w = omega_of(k);
  const Vec3 minus_k{-k[0], -k[1], -k[2]};
  const Complex forward = rho_fourier_element(params, Oscillator::A, +1, k) *
                          rho_fourier_element(params, Oscillator::B, -1, k);
  const Complex backward = rho_fourier_element(params, Oscillator::A, +1, minus_k) *
                           rho_fourier_element(params, Oscillator::B, -1, minus_k);
  return 0.5 * (forward + backward) / (w * w);
}

InteractionHamiltonian::InteractionHamiltonian(const SystemParams& params, Registry registry,
                                               Metric metric)
    : params_(params), registry_(std::move(registry)), metric_(metric) {
  if (!registry_) throw std::invalid_argument("InteractionHamiltonian needs a registry");
  const int n_max = registry_->truncation().n_max;
  const double root_2pi3 = std::pow(2.0 * kPi, 1.5);
  for (std::size_t i = 0; i < registry_->size(); ++i) {
    const auto& mode = registry_->mode(i);
    const Vec3& k = mode.k_vector;
    const Vec3 minus_k{-k[0], -k[1], -k[2]};
    const double root_w = std::sqrt(mode.weight);
    ModeCoupling coupling{i, mode.kind == PolarizationKind::scalar, {}, {}};
    for (auto osc : {Oscillator::A, Oscillator::B}) {
      const auto o = static_cast<std::size_t>(osc);
      if (mode.kind == PolarizationKind::scalar) {
        const double factor = root_w * root_2pi3 * mode_normalization(k);
        coupling.create[o] = factor * rho_matrix(params_, osc, k, n_max);
        coupling.annihilate[o] = factor * rho_matrix(params_, osc, minus_k, n_max);
      } else if (mode.kind == PolarizationKind::longitudinal) {
        coupling.create[o] = root_w * longitudinal_creation_matrix(params_, osc, k, n_max);
        coupling.annihilate[o] = root_w * longitudinal_annihilation_matrix(params_, osc, k, n_max);
      }
    }
    if (mode.kind == PolarizationKind::scalar || mode.kind == PolarizationKind::longitudinal) {
      couplings_.push_back(std::move(coupling));
    }
  }
}

StateVector InteractionHamiltonian::apply(const StateVector& state) const {
  if (state.registry() != registry_) {
    throw RegistryMismatch("InteractionHamiltonian applied to a state on another registry");
  }
  StateVector out(registry_);
  for (const auto& c : couplings_) {
    const StateVector raised = c.scalar ? metric_create(state, c.mode, metric_, OnOverflow::project)
                                        : create(state, c.mode, OnOverflow::project);
    const StateVector lowered = annihilate(state, c.mode);
    for (auto osc : {Oscillator::A, Oscillator::B}) {
      const auto o = static_cast<std::size_t>(osc);
      if (!raised.empty()) out += apply_oscillator(raised, osc, c.create[o]);
      if (!lowered.empty()) out += apply_oscillator(lowered, osc, c.annihilate[o]);
    }
  }
  return out;
}

double InteractionHamiltonian::energy(const OccupationState& state) const {
  double e = params_.omega_a * state.level_a + params_.omega_b * state.level_b;
  for (std::size_t i = 0; i < state.photons.size(); ++i) {
    e += registry_->mode(i).omega() * state.photons[i];
  }
  return e;
}

OccupationState initial_state(const ModeRegistry& registry) {
  return {1, 0, std::vector<std::uint8_t>(registry.size(), 0)};
}

OccupationState target_state(const ModeRegistry& registry) {
  return {0, 1, std::vector<std::uint8_t>(registry.size(), 0)};
}

Complex discrete_second_order(const SystemParams& params, const Registry& registry,
                              const Metric& metric) {
  validate(params);
  const InteractionHamiltonian h(params, registry, metric);
  const auto n = initial_state(*registry);
  const auto m = target_state(*registry);
  const double e_n = h.energy(n);

  const StateVector first = h.apply(StateVector::basis(registry, n));
  StateVector intermediate(registry);
  for (const auto& [l, amp] : first) {
    if (l == n) continue;  // intermediate states equal to the initial one are excluded
    const double gap = e_n - h.energy(l);
    if (params.eta == 0.0 && std::abs(gap) <= 1e-12 * std::max(1.0, e_n)) {
      std::string which = "intermediate state";
      for (std::size_t i = 0; i < l.photons.size(); ++i) {
        if (l.photons[i] != 0) which = describe_mode(*registry, i);
      }
      throw ResonanceError("resonance: " + which + " is on shell with the initial state");
    }
    intermediate.add(l, amp / Complex(gap, params.eta));
  }
  const StateVector second = h.apply(intermediate);
  return second[m] / (e_n - h.energy(m));
}

Complex riemann_sum_diagrams(const SystemParams& params, const ModeRegistry& registry) {
  validate(params);
  const double prefactor = common_prefactor(params);
  Complex sum{};
  for (const auto& mode : registry.modes()) {
    if (mode.kind != PolarizationKind::scalar && mode.kind != PolarizationKind::longitudinal) {
      continue;
    }
    for (auto order : {OrderType::typeI, OrderType::typeII}) {
      sum += mode.weight * diagram_integrand(params, {order, mode.kind}, mode.k_vector);
    }
  }
  return prefactor * sum;
}

namespace {

void enumerate_photons(const Truncation& t, std::size_t modes, std::vector<std::uint8_t>& current,
                       std::size_t index, int total,
                       std::vector<std::vector<std::uint8_t>>& out) {
  if (index == modes) {
    out.push_back(current);
    return;
  }
  for (int n = 0; n <= t.p_max && total + n <= t.max_total_photons; ++n) {
    current[index] = static_cast<std::uint8_t>(n);
    enumerate_photons(t, modes, current, index + 1, total + n, out);
  }
  current[index] = 0;
}

std::vector<OccupationState> truncated_basis(const ModeRegistry& registry) {
  const auto& t = registry.truncation();
  std::vector<std::vector<std::uint8_t>> photon_sets;
  std::vector<std::uint8_t> current(registry.size(), 0);
  enumerate_photons(t, registry.size(), current, 0, 0, photon_sets);
  std::vector<OccupationState> basis;
  for (int a = 0; a <= t.n_max; ++a) {
    for (int b = 0; b <= t.n_max; ++b) {
      for (const auto& photons : photon_sets) basis.push_back({a, b, photons});
    }
  }
  return basis;
}

}  // namespace

OracleResult exact_diagonalization_oracle(const SystemParams& params, const Registry& registry,
                                          const Metric& metric) {
  validate(params);
  if (registry->size() > 4) throw ValidationError("oracle registry holds at most 4 modes");
  const auto basis = truncated_basis(*registry);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::map<OccupationState, Eigen::Index> index;
  for (Eigen::Index i = 0; i < dim; ++i) index.emplace(basis[i], i);

  OracleResult result;
  result.basis_size = basis.size();
  if (params.charge_q == 0.0) {
    result.tracked_overlap = 1.0;
    return result;
  }

  const InteractionHamiltonian h(params, registry, metric);
  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    matrix(j, j) = h.energy(basis[j]);
    for (const auto& [state, amp] : h.apply(StateVector::basis(registry, basis[j]))) {
      auto it = index.find(state);
      if (it == index.end()) throw InvariantError("interaction left the truncated basis");
      matrix(it->second, j) += amp;
    }
  }

  // eta H must be Hermitian for a metric-self-adjoint H.
  Eigen::MatrixXcd weighted = matrix;
  for (Eigen::Index i = 0; i < dim; ++i) {
    weighted.row(i) *= static_cast<double>(metric.weight(basis[i], *registry));
  }
  const double scale = std::max(1.0, weighted.cwiseAbs().maxCoeff());
  const double asymmetry = (weighted - weighted.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * scale) {
    throw InvariantError("metric-weighted Hamiltonian is not Hermitian (asymmetry " +
                         std::to_string(asymmetry) + ")");
  }

  // Extended precision: the target component is set by the small splitting
  // dE, which amplifies rounding in double precision.
  using WideMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::ComplexEigenSolver<WideMatrix> solver(matrix.cast<std::complex<long double>>());
  if (solver.info() != Eigen::Success) throw TrackingError("eigen decomposition failed");
  const auto& values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex value(static_cast<double>(values(i).real()),
                        static_cast<double>(values(i).imag()));
    const double im = std::abs(value.imag());
    result.max_imag_eigenvalue = std::max(result.max_imag_eigenvalue, im);
    if (im > kRealSpectrumTol * std::max(1.0, std::abs(value))) {
      throw InvariantError("non-real eigenvalue " + std::to_string(value.real()) + " + " +
                           std::to_string(value.imag()) + "i: metric handling is inconsistent");
    }
  }

  const Eigen::Index n = index.at(initial_state(*registry));
  const Eigen::Index m = index.at(target_state(*registry));
  const auto& vectors = solver.eigenvectors();
  Eigen::Index best = 0;
  double best_overlap = -1.0, runner_up = 0.0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    const auto overlap = static_cast<double>(std::abs(vectors(n, c)) / vectors.col(c).norm());
    if (overlap > best_overlap) {
      runner_up = std::max(runner_up, best_overlap);
      best_overlap = overlap;
      best = c;
    } else {
      runner_up = std::max(runner_up, overlap);
    }
  }
  result.tracked_overlap = best_overlap;
  result.runner_up_overlap = runner_up;
  if (best_overlap < 2.0 * runner_up) {
    throw TrackingError("eigenvector connected to |1_A 0_B 0_F> is ambiguous (overlaps " +
                            std::to_string(best_overlap) + " vs " + std::to_string(runner_up) +
                            ")",
                        runner_up);
  }
  const auto ratio = vectors(m, best) / vectors(n, best);
  result.epsilon = Complex(static_cast<double>(ratio.real()), static_cast<double>(ratio.imag()));
  return result;
}

ScalingReport oracle_scaling(const SystemParams& params, const Registry& registry) {
  ScalingReport report;
  for (double factor : {1.0, 0.5, 0.25}) {
    SystemParams p = params;
    p.charge_q = params.charge_q * factor;
    ScalingPoint point{p.charge_q, discrete_second_order(p, registry), {}, 0.0};
    const auto exact = exact_diagonalization_oracle(p, registry);
    point.exact = exact.epsilon;
    point.residual = std::abs(point.perturbative - point.exact);
    report.max_imag_eigenvalue = std::max(report.max_imag_eigenvalue, exact.max_imag_eigenvalue);
    report.points.push_back(point);
  }
  const bool all_zero = std::all_of(report.points.begin(), report.points.end(),
                                    [](const ScalingPoint& p) { return p.residual == 0.0; });
  if (all_zero) {
    report.exact = true;
    report.pass = true;
    return report;
  }
  const bool any_zero = std::any_of(report.points.begin(), report.points.end(),
                                    [](const ScalingPoint& p) { return p.residual == 0.0; });
  if (any_zero) return report;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(report.points.size());
  for (const auto& p : report.points) {
    const double x = std::log(std::abs(p.charge)), y = std::log(p.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  report.pass = std::abs(report.exponent - kScalingExponent) <= kScalingTolerance;
  return report;
}

Registry default_oracle_registry(const Vec3& k_longitudinal, const Vec3& k_scalar,
                                 double weight, const Truncation& truncation) {
  return ModeRegistry::make({{k_longitudinal, PolarizationKind::longitudinal, weight},
                             {k_scalar, PolarizationKind::scalar, weight}},
                            truncation);
}

}  // namespace covent
