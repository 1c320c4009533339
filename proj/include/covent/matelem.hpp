#pragma once

// Emission and absorption matrix elements between the two lowest oscillator
// levels for scalar and longitudinal photons, Fourier components of the
// charge density, and the full oscillator-space operators used to build
// Hamiltonians on a truncated basis.
//
// Conventions: N(k) = sqrt(1 / (2 omega (2 pi)^3)), g(k) = exp(-(k_x d)^2 / 2).
// The absorption elements already carry the metric sign of the intermediate
// scalar photon, so a product emission * absorption is the physical
// second-order numerator.

#include <complex>

#include "covent/core.hpp"
#include "covent/fock.hpp"

namespace covent {

using Complex = std::complex<double>;

enum class Process { scalar_emit, scalar_absorb, long_emit, long_absorb, rho_fourier };

struct TransitionElement {
  Complex value;
  Process process;
  Vec3 k;
};

/// sqrt(1 / (2 omega (2 pi)^3)) for omega = |k|; throws for k = 0.
double mode_normalization(const Vec3& k);
/// exp(-(k_x d)^2 / 2).
double form_factor(const SystemParams& params, const Vec3& k);

/// <0|H_s|1> of oscillator `osc` emitting a scalar photon k.
Complex scalar_emission(const SystemParams& params, Oscillator osc, const Vec3& k);
/// <1|H_s|0> of `osc` absorbing a scalar photon k, including the metric sign.
Complex scalar_absorption(const SystemParams& params, Oscillator osc, const Vec3& k);
Complex longitudinal_emission(const SystemParams& params, Oscillator osc, const Vec3& k);
Complex longitudinal_absorption(const SystemParams& params, Oscillator osc, const Vec3& k);

/// <0|rho(k)|1> for sign = +1 and <1|rho(-k)|0> for sign = -1, with
/// rho(k) = (2 pi)^(-3/2) Int rho(r) exp(-i k.r) d^3r.
Complex rho_fourier_element(const SystemParams& params, Oscillator osc, int sign, const Vec3& k);

TransitionElement transition_element(const SystemParams& params, Oscillator osc, Process process,
                                     const Vec3& k);

/// <m|exp(i kappa xi)|n> over levels 0..n_max, xi = d (b + b^+) the
/// displacement from the oscillator center. Exact elements, not the
/// exponential of a truncated matrix.
OscillatorMatrix displacement_matrix(double kappa, double d, int n_max);

/// Charge density of one oscillator at wave vector k, <m|rho(k)|n>, with a
/// fixed charge -q at the center so the oscillator is neutral.
OscillatorMatrix rho_matrix(const SystemParams& params, Oscillator osc, const Vec3& k, int n_max);

/// Longitudinal current coupling, obtained from rho through continuity:
/// q (omega_m - omega_n) / k <m|exp(-i k.x)|n> N for photon creation and its
/// adjoint for annihilation.
OscillatorMatrix longitudinal_creation_matrix(const SystemParams& params, Oscillator osc,
                                              const Vec3& k, int n_max);
OscillatorMatrix longitudinal_annihilation_matrix(const SystemParams& params, Oscillator osc,
                                                  const Vec3& k, int n_max);

struct FormFactorResult {
  Complex value;
  double error;
  int nodes;
};

/// Int phi_0(x) exp(-i k_x x) phi_1(x) dx with explicit oscillator
/// eigenfunctions, by Gauss-Hermite quadrature at n and 2n nodes.
FormFactorResult form_factor_oracle(const SystemParams& params, Oscillator osc, double k_x,
                                    int nodes = 64);

}  // namespace covent
