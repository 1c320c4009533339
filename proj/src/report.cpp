#include "covent/report.hpp"

#include <algorithm>
#include <cmath>

namespace covent {

bool EpsilonReport::invariants_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.kind == CheckKind::claim || c.pass; });
}

namespace {

Check relative_check(std::string name, CheckKind kind, double value, double expected,
                     double tolerance) {
  const bool pass = std::abs(value - expected) <= tolerance * std::abs(expected);
  return {std::move(name), kind, pass, value, expected, tolerance};
}

}  // namespace

EpsilonReport compute_report(const RunConfig& config) {
  EpsilonReport r;
  r.params = config.params;
  r.quadrature = config.quadrature;
  r.diagnostics = validate(config.params);

  const KSpaceIntegrator integrator(config.params, config.quadrature);
  r.coulomb = epsilon_coulomb(integrator);
  r.lorentz = epsilon_lorentz(integrator);
  r.transformed = transformed_epsilon(integrator);
  r.series = series_coefficients(integrator);
  r.coulomb_closed_form = epsilon_coulomb_closed_form(config.params);
  r.lorentz_series_prediction = epsilon_lorentz_series_prediction(config.params);
  r.ratio = r.lorentz.value / r.coulomb.value;
  r.ratio_error = std::abs(r.ratio) * (r.lorentz.error / std::abs(r.lorentz.value) +
                                       r.coulomb.error / std::abs(r.coulomb.value));
  r.residue = r.lorentz.discarded_imag;
  r.cutoff = integrator.cutoff();
  r.pole_window = integrator.window();
  r.panels = integrator.panels();

  const auto& tol = config.tolerances;
  const double de = config.params.delta_e();
  const double combined = r.transformed.error + r.lorentz.error;
  const double tolerance =
      std::max(tol.transformed, combined / std::abs(r.lorentz.value));
  r.checks.push_back(relative_check("transformed_equals_lorentz", CheckKind::invariant,
                                    r.transformed.value, r.lorentz.value, tolerance));
  // The reconstruction from the expansion terms holds up to O(dE^3).
  const double wa = config.params.omega_a;
  const double reconstructed =
      r.series.c0.value + r.series.c1.value * de / config.params.omega_l() +
      r.series.c2.value * (de / wa) * (de / wa);
  const double closed = r.coulomb_closed_form;
  r.checks.push_back({"series_reconstruction", CheckKind::invariant,
                      std::abs(r.lorentz.value / closed - reconstructed) <=
                          10.0 * std::pow(de / wa, 3) + 1e-9,
                      reconstructed, r.lorentz.value / closed, 10.0 * std::pow(de / wa, 3) + 1e-9});
  r.checks.push_back(relative_check("coulomb_closed_form", CheckKind::claim, r.coulomb.value,
                                    closed, tol.coulomb_closed_form));
  r.checks.push_back(relative_check("c0", CheckKind::claim, r.series.c0.value, kSeriesC0, tol.c0));
  r.checks.push_back(relative_check("c1", CheckKind::claim, r.series.c1.value, kSeriesC1, tol.c1));
  r.checks.push_back(relative_check("c2", CheckKind::claim, r.series.c2.value, kSeriesC2, tol.c2));
  const double predicted_ratio = r.lorentz_series_prediction / closed;
  r.checks.push_back({"ratio_series", CheckKind::claim,
                      std::abs(r.ratio - predicted_ratio) <= tol.ratio, r.ratio, predicted_ratio,
                      tol.ratio});
  return r;
}

}  // namespace covent
