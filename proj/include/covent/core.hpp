#pragma once

// Physical parameters, unit conventions and validation shared by every module.
//
// Natural units are used throughout: hbar = c = eps0 = 1. Both oscillators
// sit on the x axis (A at the origin, B at x = L) and their dipoles point
// along x, so k.d = k_x d and k.(r_A0 - r_B0) = -k_x L.

#include <array>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace covent {

inline constexpr double kPi = std::numbers::pi;

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v) noexcept;

/// Input that violates a hard physical or configuration constraint.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure that could not reach its requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate = 0.0)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// A computed identity that should hold exactly did not (signals a sign or
/// metric bug rather than a numerical shortfall).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Oscillator { A, B };

struct SystemParams {
  double omega_a = 1.0;
  double omega_b = 1.01;
  double separation_l = 2.0;
  // Either dipole_d is given directly or it is derived from mass_m.
  std::optional<double> dipole_d = 0.02;
  std::optional<double> mass_m;
  double charge_q = 1.0;
  // Pole regulator; only its side matters since the principal value is taken.
  double eta = 0.0;

  double delta_e() const noexcept { return omega_b - omega_a; }
  double omega_l() const noexcept { return 1.0 / separation_l; }
  double dipole() const;
  double omega(Oscillator osc) const noexcept {
    return osc == Oscillator::A ? omega_a : omega_b;
  }
  /// x coordinate of the oscillator center.
  double center(Oscillator osc) const noexcept {
    return osc == Oscillator::A ? 0.0 : separation_l;
  }
  /// Particle mass, derived from d when only the dipole length is known.
  double mass(Oscillator osc) const;
};

/// d = sqrt(hbar / (2 m omega)).
double derive_dipole(double mass_m, double omega);

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity;
  std::string message;
};

// Soft limits standing in for "much less than".
inline constexpr double kMaxDipoleRatio = 0.05;
inline constexpr double kMaxSplittingRatio = 0.1;

/// Checks the parameter set. Returns soft warnings; throws ValidationError
/// for non-finite or non-positive quantities and for a vanishing or negative
/// splitting.
std::vector<Diagnostic> validate(const SystemParams& params);

}  // namespace covent
