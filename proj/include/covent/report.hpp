#pragma once

// Everything the epsilon and expand commands print, computed on one radial
// grid.

#include <string>
#include <vector>

#include "covent/config.hpp"
#include "covent/gauge.hpp"
#include "covent/quadrature.hpp"

namespace covent {

enum class CheckKind {
  invariant,  // an identity of the implementation; failure means a bug
  claim,      // a closed-form value to reproduce; failure is a reported discrepancy
};

struct Check {
  std::string name;
  CheckKind kind;
  bool pass;
  double value;
  double expected;
  double tolerance;
};

struct EpsilonReport {
  SystemParams params;
  QuadratureConfig quadrature;
  std::vector<Diagnostic> diagnostics;

  IntegralResult coulomb;
  IntegralResult lorentz;
  IntegralResult transformed;
  double coulomb_closed_form = 0.0;
  double lorentz_series_prediction = 0.0;
  double ratio = 0.0;
  double ratio_error = 0.0;
  SeriesCoefficients series;
  double residue = 0.0;  // discarded on-shell imaginary part of eps_L

  double cutoff = 0.0;
  double pole_window = 0.0;
  std::size_t panels = 0;

  std::vector<Check> checks;

  bool invariants_pass() const;
};

EpsilonReport compute_report(const RunConfig& config);

}  // namespace covent
