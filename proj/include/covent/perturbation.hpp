#pragma once

// Lorentz-gauge second-order amplitude (four exchange diagrams), the
// Coulomb-gauge first-order integrand, and an exact-diagonalization oracle
// on a finite mode registry.
//
// Diagram integrands exclude the common factor q^2 / (2 dE (2 pi)^3), so that
//     eps = common_prefactor * Int d^3k sum_diagrams integrand(k).
// The A^2 term of the nonrelativistic Hamiltonian changes both oscillators at
// once only at order q^4 and is left out of every Hamiltonian here.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "covent/fock.hpp"
#include "covent/matelem.hpp"

namespace covent {

/// An intermediate state sits exactly on the initial energy.
class ResonanceError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// The perturbed eigenvector could not be singled out.
class TrackingError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

enum class OrderType { typeI, typeII };

struct DiagramSpec {
  OrderType order;
  PolarizationKind kind;  // scalar or longitudinal

  bool operator==(const DiagramSpec&) const = default;
};

inline constexpr std::array<DiagramSpec, 4> kAllDiagrams{{
    {OrderType::typeI, PolarizationKind::scalar},
    {OrderType::typeII, PolarizationKind::scalar},
    {OrderType::typeI, PolarizationKind::longitudinal},
    {OrderType::typeII, PolarizationKind::longitudinal},
}};

std::string to_string(const DiagramSpec& spec);

/// q^2 / (2 dE (2 pi)^3).
double common_prefactor(const SystemParams& params);

/// Type I: A emits first, denominator omega_A - omega + i eta.
/// Type II: B emits first, denominator -omega_B - omega + i eta.
/// Throws ResonanceError for a type I integrand on the pole with eta = 0.
Complex diagram_integrand(const SystemParams& params, const DiagramSpec& spec, const Vec3& k);

/// B_L = (1/2) ((wA wB - w^2) / w) (1 / (wA - w) - 1 / (wB + w)).
double lorentz_bracket(const SystemParams& params, double omega);
/// Term of the small-splitting expansion of B_L, order 0, 1 or 2.
double expansion_term(const SystemParams& params, double omega, int order);

/// Coulomb integrand per unit d^3k:
/// -(q^2 / (dE (2 pi)^3)) (k_x d)^2 / k^2 cos(k_x L) exp(-(k_x d)^2).
double coulomb_integrand(const SystemParams& params, const Vec3& k);

/// <0_A 1_B|H_C|1_A 0_B> restricted to modes k (both orderings of A and B).
Complex coulomb_matrix_element(const SystemParams& params, const Vec3& k);

/// Lorentz-gauge interaction on a mode registry: scalar photons couple to
/// rho, longitudinal photons to the current. Each mode enters with
/// sqrt(weight).
class InteractionHamiltonian {
 public:
  InteractionHamiltonian(const SystemParams& params, Registry registry, Metric metric = {});

  /// H_I |state>, dropping components outside the truncation.
  StateVector apply(const StateVector& state) const;
  /// Unperturbed energy, scalar photons counted with positive energy.
  double energy(const OccupationState& state) const;

  const Registry& registry() const noexcept { return registry_; }
  const SystemParams& params() const noexcept { return params_; }

 private:
  struct ModeCoupling {
    std::size_t mode;
    bool scalar;
    std::array<OscillatorMatrix, 2> create;    // per oscillator
    std::array<OscillatorMatrix, 2> annihilate;
  };
  SystemParams params_;
  Registry registry_;
  Metric metric_;
  std::vector<ModeCoupling> couplings_;
};

/// Initial |1_A 0_B 0_F> and target |0_A 1_B 0_F> states of a registry.
OccupationState initial_state(const ModeRegistry& registry);
OccupationState target_state(const ModeRegistry& registry);

/// Second-order coefficient of |0_A 1_B 0_F> by applying H_I twice with
/// energy denominators. Transverse modes are ignored.
Complex discrete_second_order(const SystemParams& params, const Registry& registry,
                              const Metric& metric = {});

/// The same coefficient from the closed-form diagram integrands, summed over
/// the registry with each mode's weight.
Complex riemann_sum_diagrams(const SystemParams& params, const ModeRegistry& registry);

struct OracleResult {
  Complex epsilon;
  std::size_t basis_size = 0;
  double max_imag_eigenvalue = 0.0;
  double tracked_overlap = 0.0;   // |coefficient on the initial state| / norm
  double runner_up_overlap = 0.0;
};

/// Tolerance on imaginary parts of eigenvalues before the spectrum is
/// declared non-real.
inline constexpr double kRealSpectrumTol = 1e-10;

/// Diagonalizes H_0 + H_I on the full truncated basis and returns the
/// |0_A 1_B 0_F> coefficient of the eigenvector connected to |1_A 0_B 0_F>,
/// normalized to unit coefficient on the latter.
OracleResult exact_diagonalization_oracle(const SystemParams& params, const Registry& registry,
                                          const Metric& metric = {});

struct ScalingPoint {
  double charge;
  Complex perturbative;
  Complex exact;
  double residual;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;
  bool exact = false;  // every residual is zero (q = 0)
  bool pass = false;
  double max_imag_eigenvalue = 0.0;
};

inline constexpr double kScalingExponent = 4.0;
inline constexpr double kScalingTolerance = 0.2;

/// Residual |eps_PT - eps_exact| at q, q/2, q/4 and its least-squares
/// exponent in q.
ScalingReport oracle_scaling(const SystemParams& params, const Registry& registry);

/// Two-mode registry for the oracle: one longitudinal and one scalar mode.
/// The two wave vectors need different magnitudes. A longitudinal and a
/// scalar photon of equal energy are degenerate states of opposite norm, and
/// the interaction turns such a pair into complex-conjugate eigenvalues.
Registry default_oracle_registry(const Vec3& k_longitudinal = {1.6, 0.3, 0.0},
                                 const Vec3& k_scalar = {2.4, -0.5, 0.0}, double weight = 1.0,
                                 const Truncation& truncation = {});

}  // namespace covent
