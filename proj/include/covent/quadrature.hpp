#pragma once

// Reduction of the d^3k integrals to radial integrals, principal-value
// integration across the omega = omega_A pole, and the series coefficients
// of the small-splitting expansion.
//
// All k-space amplitudes share the form
//     eps = -(q^2 / (dE (2 pi)^3)) * d^2 * Int_0^K dk F(k) bracket(k),
// with F(k) = k^2 G(k) and G the angular reduction of the form factor and
// the separation phase. A bracket is split into a regular part and an
// optional simple pole numerator R(k) / (omega_A - k).

#include <cstddef>
#include <functional>
#include <vector>

#include "covent/core.hpp"

namespace covent {

struct QuadratureConfig {
  int radial_nodes = 16;         // Gauss-Legendre order per radial panel
  int angular_nodes = 64;        // Gauss-Legendre order per angular panel
  double kmax_over_invd = 8.0;   // radial cutoff K = kmax_over_invd / d
  double pole_window = 0.0;      // half-width; <= 0 selects the default rule
  double rel_tol = 1e-8;         // accepted error estimate relative to |value|
};

/// Throws ValidationError for unusable settings.
void validate(const QuadratureConfig& config);

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;           // >= 0
  double discarded_imag = 0.0;  // -pi * residue numerator, never added to value
  std::size_t nodes = 0;
};

struct QuadratureRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureRule gauss_legendre(int n);
/// Gauss-Hermite nodes and weights for weight exp(-t^2) on the real line.
QuadratureRule gauss_hermite(int n);

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Legendre panel quadrature of a smooth integrand on [a, b].
IntegralResult integrate_smooth(const RealFunction& f, double a, double b,
                                const QuadratureConfig& config = {});

/// PV Int_a^b numerator(k) / (pole - k) dk by subtraction of numerator(pole)
/// on a window symmetric about the pole.
IntegralResult pv_radial(const RealFunction& numerator, double pole, double a, double b,
                         const QuadratureConfig& config = {});

/// Default half-width of the pole window for a pole inside [a, b].
double default_pole_window(double pole, double a, double b);

struct AngularResult {
  double value;
  double error;
};

/// G(k) = 2 pi Int_{-1}^{1} u^2 exp(-(k d u)^2) cos(k L u) du.
AngularResult angular_reduce(const SystemParams& params, double k,
                             const QuadratureConfig& config = {});

/// A bracket multiplying F(k): regular(k) + pole_numerator(k) / (omega_A - k).
struct RadialBracket {
  RealFunction regular;
  RealFunction pole_numerator;
};

/// Holds the radial grid for one parameter set, with F(k) cached on it, so
/// that every bracket is integrated on identical nodes.
class KSpaceIntegrator {
 public:
  KSpaceIntegrator(const SystemParams& params, const QuadratureConfig& config);

  /// Int dk F(k) bracket(k), principal value at omega_A.
  IntegralResult integrate(const RadialBracket& bracket) const;

  const SystemParams& params() const noexcept { return params_; }
  const QuadratureConfig& config() const noexcept { return config_; }
  double cutoff() const noexcept { return cutoff_; }
  double pole() const noexcept { return pole_; }
  double window() const noexcept { return window_; }
  std::size_t panels() const noexcept { return panels_.size(); }
  /// -(q^2 / (dE (2 pi)^3)) d^2, turning a radial integral into an amplitude.
  double amplitude_scale() const noexcept { return scale_; }
  /// F(k) = k^2 G(k).
  double radial_weight(double k) const;

 private:
  struct Panel {
    double a, b;
    bool in_window;
  };
  struct Grid {
    std::vector<double> k, w, f;
    std::vector<bool> in_window;
  };
  double sum(const Grid& grid, const RadialBracket& bracket, double& abs_sum) const;

  SystemParams params_;
  QuadratureConfig config_;
  double cutoff_;
  double pole_;
  double window_;
  double f_pole_;
  double scale_;
  std::vector<Panel> panels_;
  Grid coarse_;
  Grid fine_;
};

/// Closed-form Coulomb amplitude d^2 q^2 / (2 pi dE L^3), valid for d << L.
double epsilon_coulomb_closed_form(const SystemParams& params);
/// Lorentz amplitude predicted by the truncated small-splitting series.
double epsilon_lorentz_series_prediction(const SystemParams& params);

IntegralResult epsilon_coulomb(const SystemParams& params, const QuadratureConfig& config = {});
IntegralResult epsilon_lorentz(const SystemParams& params, const QuadratureConfig& config = {});
// Same, reusing the grid of an existing integrator.
IntegralResult epsilon_coulomb(const KSpaceIntegrator& integrator);
IntegralResult epsilon_lorentz(const KSpaceIntegrator& integrator);

/// Scales a radial integral to an amplitude and enforces rel_tol; throws
/// ConvergenceError when the error estimate is above it.
IntegralResult to_amplitude(const KSpaceIntegrator& integrator, IntegralResult radial,
                            const char* what);

/// Coefficients of eps_L / eps_C(closed form) =
///     c0 + c1 (dE / hbar omega_L) + c2 (dE / hbar omega_A)^2 + ...
/// each extracted by integrating its own expansion term.
struct SeriesCoefficients {
  IntegralResult c0, c1, c2;
};
SeriesCoefficients series_coefficients(const SystemParams& params,
                                       const QuadratureConfig& config = {});
SeriesCoefficients series_coefficients(const KSpaceIntegrator& integrator);

// Values the coefficients take in the closed-form series.
inline constexpr double kSeriesC0 = 1.0;
inline constexpr double kSeriesC1 = -1.0 / (2.0 * kPi);
inline constexpr double kSeriesC2 = 0.5;

}  // namespace covent
