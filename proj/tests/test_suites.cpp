#include <doctest.h>

#include "near.hpp"

#include "covent/report.hpp"
#include "covent/suites.hpp"

using namespace covent;

namespace {

SuiteOptions fast() {
  SuiteOptions o;
  o.per_k_samples = 500;
  o.reconstruction_samples = 100;
  o.form_factor_points = 20;
  return o;
}

}  // namespace

TEST_CASE("every suite passes on the physical theory") {
  for (const auto& r : run_all_suites(SystemParams{}, fast())) {
    INFO(r.name);
    CHECK(r.pass);
    CHECK(r.checks > 0);
    CHECK(r.failures.empty());
  }
}

TEST_CASE("corrupted scalar metric fails the metric suite") {
  auto o = fast();
  o.corrupt_metric = true;
  const auto r = metric_suite(o);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.failures.empty());
}

TEST_CASE("corrupted pair coupling fails the subsidiary and reconstruction suites") {
  auto o = fast();
  o.corrupt_subsidiary = true;
  CHECK_FALSE(subsidiary_suite(SystemParams{}, o).pass);
  CHECK_FALSE(reconstruction_suite(SystemParams{}, o).pass);
  CHECK(metric_suite(o).pass);
}

TEST_CASE("suites are reproducible for a fixed seed") {
  const auto a = per_k_suite(SystemParams{}, fast());
  const auto b = per_k_suite(SystemParams{}, fast());
  CHECK(a.worst == b.worst);
  auto other = fast();
  other.seed = 99;
  CHECK(per_k_suite(SystemParams{}, other).worst != a.worst);
}

TEST_CASE("report separates invariants from claims") {
  const auto report = compute_report(RunConfig{});
  CHECK(report.invariants_pass());
  int invariants = 0;
  for (const auto& c : report.checks) {
    if (c.kind == CheckKind::invariant) {
      ++invariants;
      CHECK(c.pass);
    }
  }
  CHECK(invariants == 2);
  CHECK(report.transformed.value == near(report.lorentz.value, 1e-10));
  CHECK(report.ratio == near(report.lorentz.value / report.coulomb.value));
}
