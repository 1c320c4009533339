#include "covent/matelem.hpp"

#include <algorithm>
#include <cmath>

#include "covent/quadrature.hpp"

namespace covent {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_nonzero(const Vec3& k) {
  if (!(norm(k) > 0.0)) throw ValidationError("photon wave vector k = 0 (omega = 0 is singular)");
}

// q N g exp(-i k_x x0), shared by every element.
Complex vertex(const SystemParams& params, Oscillator osc, const Vec3& k, int sign) {
  return params.charge_q * mode_normalization(k) * form_factor(params, k) *
         std::exp(-static_cast<double>(sign) * kI * k[0] * params.center(osc));
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double mode_normalization(const Vec3& k) {
  require_nonzero(k);
  return std::sqrt(1.0 / (2.0 * norm(k) * std::pow(2.0 * kPi, 3)));
}

double form_factor(const SystemParams& params, const Vec3& k) {
  const double kd = k[0] * params.dipole();
  return std::exp(-0.5 * kd * kd);
}

Complex scalar_emission(const SystemParams& params, Oscillator osc, const Vec3& k) {
  return vertex(params, osc, k, +1) * (-kI * k[0] * params.dipole());
}

Complex scalar_absorption(const SystemParams& params, Oscillator osc, const Vec3& k) {
  return -vertex(params, osc, k, -1) * (kI * k[0] * params.dipole());
}

Complex longitudinal_emission(const SystemParams& params, Oscillator osc, const Vec3& k) {
  return -(params.omega(osc) / norm(k)) * scalar_emission(params, osc, k);
}

Complex longitudinal_absorption(const SystemParams& params, Oscillator osc, const Vec3& k) {
  return (params.omega(osc) / norm(k)) * scalar_absorption(params, osc, k);
}

Complex rho_fourier_element(const SystemParams& params, Oscillator osc, int sign, const Vec3& k) {
  require_nonzero(k);
  if (sign != 1 && sign != -1) throw std::invalid_argument("rho_fourier_element: sign must be +-1");
  const double s = sign;
  return params.charge_q * (-s * kI * k[0] * params.dipole()) *
         std::exp(-s * kI * k[0] * params.center(osc)) * form_factor(params, k) /
         std::pow(2.0 * kPi, 1.5);
}

TransitionElement transition_element(const SystemParams& params, Oscillator osc, Process process,
                                     const Vec3& k) {
  Complex value;
  switch (process) {
    case Process::scalar_emit: value = scalar_emission(params, osc, k); break;
    case Process::scalar_absorb: value = scalar_absorption(params, osc, k); break;
    case Process::long_emit: value = longitudinal_emission(params, osc, k); break;
    case Process::long_absorb: value = longitudinal_absorption(params, osc, k); break;
    case Process::rho_fourier: value = rho_fourier_element(params, osc, +1, k); break;
  }
  return {value, process, k};
}

OscillatorMatrix displacement_matrix(double kappa, double d, int n_max) {
  if (n_max < 0) throw std::invalid_argument("displacement_matrix: n_max < 0");
  // D(alpha) with alpha = i kappa d.
  const Complex alpha = kI * kappa * d;
  const double x = std::norm(alpha);
  const double damping = std::exp(-0.5 * x);
  OscillatorMatrix out(n_max + 1, n_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      const int lo = std::min(m, n), diff = std::abs(m - n);
      const double norm_factor = std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + diff)));
      const Complex base = m >= n ? alpha : -std::conj(alpha);
      out(m, n) = norm_factor * std::pow(base, diff) * damping *
                  std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(diff), x);
    }
  }
  return out;
}

OscillatorMatrix rho_matrix(const SystemParams& params, Oscillator osc, const Vec3& k, int n_max) {
  OscillatorMatrix out = displacement_matrix(-k[0], params.dipole(), n_max);
  out -= OscillatorMatrix::Identity(n_max + 1, n_max + 1);
  out *= params.charge_q * std::exp(-kI * k[0] * params.center(osc)) / std::pow(2.0 * kPi, 1.5);
  return out;
}

namespace {

OscillatorMatrix level_difference_scaled(const SystemParams& params, Oscillator osc,
                                         const OscillatorMatrix& rho, double factor) {
  OscillatorMatrix out = rho;
  const double w = params.omega(osc);
  for (int m = 0; m < out.rows(); ++m) {
    for (int n = 0; n < out.cols(); ++n) out(m, n) *= factor * (m - n) * w;
  }
  return out;
}

}  // namespace

OscillatorMatrix longitudinal_creation_matrix(const SystemParams& params, Oscillator osc,
                                              const Vec3& k, int n_max) {
  const double factor = mode_normalization(k) * std::pow(2.0 * kPi, 1.5) / norm(k);
  return level_difference_scaled(params, osc, rho_matrix(params, osc, k, n_max), factor);
}

OscillatorMatrix longitudinal_annihilation_matrix(const SystemParams& params, Oscillator osc,
                                                  const Vec3& k, int n_max) {
  const Vec3 minus_k{-k[0], -k[1], -k[2]};
  const double factor = -mode_normalization(k) * std::pow(2.0 * kPi, 1.5) / norm(k);
  return level_difference_scaled(params, osc, rho_matrix(params, osc, minus_k, n_max), factor);
}

namespace {

Complex hermite_form_factor(double mass, double omega, double k_x, int nodes) {
  // x = s / sqrt(m omega):  phi_0 phi_1 dx = sqrt(2 / pi) s exp(-s^2) ds.
  const auto rule = gauss_hermite(nodes);
  const double scale = k_x / std::sqrt(mass * omega);
  Complex sum{};
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double s = rule.x[i];
    sum += rule.w[i] * s * std::exp(-kI * scale * s);
  }
  return std::sqrt(2.0 / kPi) * sum;
}

}  // namespace

FormFactorResult form_factor_oracle(const SystemParams& params, Oscillator osc, double k_x,
                                    int nodes) {
  if (!std::isfinite(k_x)) throw ValidationError("form_factor_oracle: k_x must be finite");
  if (nodes < 2) throw ValidationError("form_factor_oracle: at least 2 nodes");
  const double mass = params.mass(osc), omega = params.omega(osc);
  const Complex coarse = hermite_form_factor(mass, omega, k_x, nodes);
  const Complex fine = hermite_form_factor(mass, omega, k_x, 2 * nodes);
  const double error = std::abs(fine - coarse);
  // The terms sum to sqrt(2/pi) in magnitude, which sets the rounding floor.
  if (error > 1e-13 * std::max(std::abs(fine), std::sqrt(2.0 / kPi))) {
    throw ConvergenceError("form_factor_oracle: Gauss-Hermite rule not converged", error);
  }
  return {fine, error, 2 * nodes};
}

}  // namespace covent
