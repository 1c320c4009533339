#pragma once

// Second-order expansion of the gauge transformation T between the Coulomb
// and Lorentz gauges. The three contributions to the |0_A 1_B 0_F>
// coefficient,
//     a1:  (T^-1)^(0) |psi^(2)>
//     a9:  (T^-1)^(1) |psi^(1)>
//     a11: (T^-1)^(2) |psi^(0)>,
// are expressed as brackets multiplying the Coulomb integrand, like B_L.

#include "covent/fock.hpp"
#include "covent/perturbation.hpp"
#include "covent/quadrature.hpp"

namespace covent {

enum class TransformTermKind { a1, a9, a11 };

struct TransformBrackets {
  double a1 = 0.0;
  double a9 = 0.0;
  double a11 = 0.0;

  double sum() const noexcept { return a1 + a9 + a11; }
};

/// a1 = 1, a9 = (dE / 2w) [wA / (wA - w) + wB / (wB + w)], a11 = -dE / 2w.
TransformBrackets transform_brackets(const SystemParams& params, double omega);

struct PerKReport {
  double omega_gamma = 0.0;
  double bracket_lorentz = 0.0;
  double bracket_a1 = 0.0;
  double bracket_a9 = 0.0;
  double bracket_a11 = 0.0;
  double residual = 0.0;  // bracket_lorentz - (a1 + a9 + a11)
  /// |residual| over the larger of |B_L| and |a1| + |a9| + |a11|, the
  /// scale on which rounding enters.
  double relative_residual() const noexcept;
};

PerKReport per_k_equivalence(const SystemParams& params, double omega);

struct TermSelection {
  bool a1 = true;
  bool a9 = true;
  bool a11 = true;
};

/// Integral of the selected brackets against the Coulomb integrand.
IntegralResult transformed_epsilon(const SystemParams& params, const QuadratureConfig& config = {},
                                   TermSelection terms = {});
IntegralResult transformed_epsilon(const KSpaceIntegrator& integrator, TermSelection terms = {});

/// How the residual longitudinal-scalar coupling creates photons. `physical`
/// is a_l^+ - a_s^+ (covariant adjoints); `corrupted` is a_l^+ + a_s^+ and
/// exists for negative controls.
enum class PairCoupling { physical, corrupted };

/// Registry with a longitudinal and a scalar mode at k (and at -k when
/// `with_reflection`), weight 1, truncation n_max = 2, two photons at most.
Registry pair_registry(const Vec3& k, bool with_reflection = false);

/// The three brackets at wave vector k obtained by applying the operators
/// of the transformation to explicit states on a {k, -k} pair registry:
/// (T^-1)^(1) built from rho and a_s, |psi^(1)> from first-order
/// perturbation theory with the residual coupling, (T^-1)^(2) as half the
/// square of (T^-1)^(1). Needs cos(k_x L) away from zero.
TransformBrackets operator_route_brackets(const SystemParams& params, const Vec3& k,
                                          PairCoupling coupling = PairCoupling::physical);

/// Applies the residual coupling j_l(k) (a_l^+ - a_s^+) + h.c. at the (l, s)
/// pair for k in `state`'s registry and returns the subsidiary residual of
/// the result.
double residual_term_physicality(const SystemParams& params, const Vec3& k,
                                 const StateVector& state,
                                 PairCoupling coupling = PairCoupling::physical);

}  // namespace covent
