#pragma once

// Flat key = value run configuration. '#' starts a comment; unknown keys,
// repeated keys and malformed values are ValidationErrors.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "covent/core.hpp"
#include "covent/fock.hpp"
#include "covent/quadrature.hpp"

namespace covent {

struct Tolerances {
  double coulomb_closed_form = 0.01;  // relative, eps_C against d^2 q^2 / (2 pi dE L^3)
  double c0 = 0.005;                  // relative
  double c1 = 0.03;                   // relative
  double c2 = 0.05;                   // relative
  double ratio = 1e-3;                // absolute, eps_L / eps_C against the series
  double transformed = 1e-10;         // relative, transformed against Lorentz
  double per_k = 1e-12;               // relative
};

struct OracleConfig {
  Vec3 k_longitudinal{1.6, 0.3, 0.0};
  Vec3 k_scalar{2.4, -0.5, 0.0};
  double weight = 1.0;
  Truncation truncation{};
};

struct RunConfig {
  SystemParams params;
  QuadratureConfig quadrature;
  OracleConfig oracle;
  Tolerances tolerances;
  std::uint64_t seed = 20240101;
  int per_k_samples = 10000;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Applies one key; shared by the parser and command-line overrides.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace covent
