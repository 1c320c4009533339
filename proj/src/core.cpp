#include "covent/core.hpp"

#include <cmath>
#include <sstream>

namespace covent {

double norm(const Vec3& v) noexcept {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double derive_dipole(double mass_m, double omega) {
  if (!(mass_m > 0.0) || !(omega > 0.0) || !std::isfinite(mass_m) ||
      !std::isfinite(omega)) {
    throw ValidationError("derive_dipole: mass and frequency must be positive and finite");
  }
  return std::sqrt(1.0 / (2.0 * mass_m * omega));
}

double SystemParams::dipole() const {
  if (dipole_d) return *dipole_d;
  if (mass_m) return derive_dipole(*mass_m, omega_a);
  throw ValidationError("either dipole_d or mass_m must be set");
}

double SystemParams::mass(Oscillator osc) const {
  if (mass_m) return *mass_m;
  const double d = dipole();
  // Both oscillators share d, so the implied mass differs between them.
  return 1.0 / (2.0 * omega(osc) * d * d);
}

namespace {

void require_positive(const char* name, double value) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(name) + " is not finite");
  }
  if (!(value > 0.0)) {
    throw ValidationError(std::string(name) + " must be positive");
  }
}

std::string format_ratio(double value) {
  std::ostringstream os;
  os.precision(3);
  os << value;
  return os.str();
}

}  // namespace

std::vector<Diagnostic> validate(const SystemParams& params) {
  require_positive("omega_a", params.omega_a);
  require_positive("omega_b", params.omega_b);
  require_positive("separation_l", params.separation_l);
  if (params.dipole_d) require_positive("dipole_d", *params.dipole_d);
  if (params.mass_m) require_positive("mass_m", *params.mass_m);
  if (!params.dipole_d && !params.mass_m) {
    throw ValidationError("either dipole_d or mass_m must be set");
  }
  if (!std::isfinite(params.charge_q)) {
    throw ValidationError("charge_q is not finite");
  }
  if (!std::isfinite(params.eta) || params.eta < 0.0) {
    throw ValidationError("eta must be finite and non-negative");
  }

  const double delta = params.delta_e();
  if (delta == 0.0) {
    throw ValidationError("delta_e = 0: epsilon undefined (epsilon ~ 1/delta_e)");
  }
  if (delta < 0.0) {
    throw ValidationError("delta_e must be positive (omega_b > omega_a)");
  }

  std::vector<Diagnostic> out;
  const double d_over_l = params.dipole() / params.separation_l;
  if (d_over_l >= 1.0) {
    out.push_back({Severity::warning,
                   "d/L = " + format_ratio(d_over_l) +
                       " : oscillators overlap, results are not meaningful"});
  } else if (d_over_l > kMaxDipoleRatio) {
    out.push_back({Severity::warning,
                   "d/L = " + format_ratio(d_over_l) + " outside d << L regime"});
  }
  const double splitting = delta / params.omega_a;
  if (splitting > kMaxSplittingRatio) {
    out.push_back({Severity::warning, "dE/(hbar omega_A) = " + format_ratio(splitting) +
                                          " outside dE << hbar omega_A regime"});
  }
  return out;
}

}  // namespace covent
