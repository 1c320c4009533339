#pragma once

// Invariant suites run by `covent check` and reused by the acceptance
// binary. Each suite records its worst deviation and every failed check.

#include <cstdint>
#include <string>
#include <vector>

#include "covent/core.hpp"

namespace covent {

struct SuiteOptions {
  std::uint64_t seed = 20240101;
  bool corrupt_metric = false;       // scalar metric sign +1
  bool corrupt_subsidiary = false;   // a_l^+ + a_s^+ in place of a_l^+ - a_s^+
  int per_k_samples = 10000;
  int reconstruction_samples = 1000;
  int form_factor_points = 200;
  double per_k_tolerance = 1e-12;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  double worst = 0.0;  // largest deviation seen, in the suite's own measure
  std::vector<std::string> failures;

  void record(const std::string& what, double deviation, double tolerance);
};

SuiteResult metric_suite(const SuiteOptions& options);
SuiteResult subsidiary_suite(const SystemParams& params, const SuiteOptions& options);
SuiteResult form_factor_suite(const SystemParams& params, const SuiteOptions& options);
SuiteResult per_k_suite(const SystemParams& params, const SuiteOptions& options);
SuiteResult reconstruction_suite(const SystemParams& params, const SuiteOptions& options);

std::vector<SuiteResult> run_all_suites(const SystemParams& params, const SuiteOptions& options);

}  // namespace covent
