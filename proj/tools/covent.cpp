#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covent/config.hpp"
#include "covent/gauge.hpp"
#include "covent/perturbation.hpp"
#include "covent/report.hpp"
#include "covent/suites.hpp"

using namespace covent;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kConvergence = 2, kInvariant = 3 };

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x + 0.0);  // no "-0"
  return buf;
}

// JSON number rounded to 9 significant digits.
ordered_json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(num(x));
}

ordered_json jresult(const IntegralResult& r) {
  return {{"value", jnum(r.value)}, {"error", jnum(r.error)}};
}

struct Common {
  std::string config_path;
  bool json = false;
  bool plot_data = false;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
};

RunConfig load(const Common& common) {
  RunConfig config = common.config_path.empty() ? RunConfig{} : load_config(common.config_path);
  if (common.seed) config.seed = *common.seed;
  return config;
}

ordered_json params_json(const SystemParams& p) {
  return {{"omega_a", jnum(p.omega_a)},         {"omega_b", jnum(p.omega_b)},
          {"delta_e", jnum(p.delta_e())},       {"separation_l", jnum(p.separation_l)},
          {"dipole_d", jnum(p.dipole())},       {"charge_q", jnum(p.charge_q)},
          {"eta", jnum(p.eta)}};
}

void print_params(std::ostream& out, const SystemParams& p) {
  out << "parameters\n";
  const std::pair<const char*, double> rows[] = {
      {"omega_a", p.omega_a},           {"omega_b", p.omega_b}, {"delta_e", p.delta_e()},
      {"separation_l", p.separation_l}, {"dipole_d", p.dipole()}, {"charge_q", p.charge_q},
      {"eta", p.eta}};
  for (const auto& [key, value] : rows) {
    out << "  " << std::left << std::setw(16) << key << num(value) << "\n";
  }
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << "warning: " << d.message << "\n";
}

// ---- epsilon -------------------------------------------------------------

const std::vector<std::string> kCsvHeader{
    "omega_a",     "omega_b",         "delta_e", "separation_l", "dipole_d",
    "charge_q",    "eps_coulomb",     "eps_lorentz", "eps_transformed", "ratio",
    "c0",          "c1",              "c2",      "residue",      "status"};

std::string csv_row(const SystemParams& p, const EpsilonReport* r, const std::string& status) {
  std::vector<std::string> cells{num(p.omega_a),      num(p.omega_b), num(p.delta_e()),
                                 num(p.separation_l), "",             num(p.charge_q)};
  try {
    cells[4] = num(p.dipole());
  } catch (const std::exception&) {
    cells[4] = "nan";
  }
  if (r) {
    for (double v : {r->coulomb.value, r->lorentz.value, r->transformed.value, r->ratio,
                     r->series.c0.value, r->series.c1.value, r->series.c2.value, r->residue}) {
      cells.push_back(num(v));
    }
  } else {
    cells.insert(cells.end(), 8, "nan");
  }
  cells.push_back(status);
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  return line;
}

std::string csv_header() {
  std::string line;
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) line += (i ? "," : "") + kCsvHeader[i];
  return line;
}

ordered_json report_json(const EpsilonReport& r) {
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"kind", c.kind == CheckKind::invariant ? "invariant" : "claim"},
                      {"pass", c.pass},
                      {"value", jnum(c.value)},
                      {"expected", jnum(c.expected)},
                      {"tolerance", jnum(c.tolerance)}});
  }
  ordered_json warnings = ordered_json::array();
  for (const auto& d : r.diagnostics) warnings.push_back(d.message);
  return {{"params", params_json(r.params)},
          {"eps_coulomb", jresult(r.coulomb)},
          {"eps_coulomb_closed_form", jnum(r.coulomb_closed_form)},
          {"eps_lorentz", jresult(r.lorentz)},
          {"eps_transformed", jresult(r.transformed)},
          {"ratio", {{"value", jnum(r.ratio)}, {"error", jnum(r.ratio_error)}}},
          {"ratio_series_prediction", jnum(r.lorentz_series_prediction)},
          {"series",
           {{"c0", jresult(r.series.c0)}, {"c1", jresult(r.series.c1)}, {"c2", jresult(r.series.c2)}}},
          {"residue", jnum(r.residue)},
          {"quadrature",
           {{"cutoff", jnum(r.cutoff)},
            {"pole_window", jnum(r.pole_window)},
            {"panels", r.panels},
            {"radial_nodes", r.quadrature.radial_nodes},
            {"angular_nodes", r.quadrature.angular_nodes},
            {"rel_tol", jnum(r.quadrature.rel_tol)}}},
          {"warnings", warnings},
          {"checks", checks}};
}

void print_row(std::ostream& out, const std::string& name, double value, double error) {
  out << "  " << std::left << std::setw(18) << name << std::setw(18) << num(value) << num(error)
      << "\n";
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  out << "checks\n";
  for (const auto& c : checks) {
    out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << std::left << std::setw(28) << c.name
        << (c.kind == CheckKind::invariant ? "invariant " : "claim     ") << "value "
        << num(c.value) << "  expected " << num(c.expected) << "  tol " << num(c.tolerance) << "\n";
  }
}

void print_report(std::ostream& out, const EpsilonReport& r) {
  print_params(out, r.params);
  out << "results                value             error\n";
  print_row(out, "eps_coulomb", r.coulomb.value, r.coulomb.error);
  print_row(out, "eps_lorentz", r.lorentz.value, r.lorentz.error);
  print_row(out, "eps_transformed", r.transformed.value, r.transformed.error);
  print_row(out, "ratio", r.ratio, r.ratio_error);
  print_row(out, "c0", r.series.c0.value, r.series.c0.error);
  print_row(out, "c1", r.series.c1.value, r.series.c1.error);
  print_row(out, "c2", r.series.c2.value, r.series.c2.error);
  out << "  residue (discarded imaginary part of eps_lorentz) " << num(r.residue) << "\n";
  out << "  closed-form eps_coulomb " << num(r.coulomb_closed_form) << ", series eps_lorentz "
      << num(r.lorentz_series_prediction) << "\n";
  out << "quadrature  cutoff " << num(r.cutoff) << "  pole window " << num(r.pole_window)
      << "  panels " << r.panels << "\n";
  print_checks(out, r.checks);
}

// (k, integrands) columns of the radial integrals.
void print_epsilon_plot(std::ostream& out, const RunConfig& config) {
  const KSpaceIntegrator integrator(config.params, config.quadrature);
  const double wa = config.params.omega_a;
  out << "# k lorentz_integrand coulomb_integrand\n";
  const int points = 400;
  for (int i = 1; i <= points; ++i) {
    const double k = integrator.cutoff() * i / points;
    if (std::abs(k - wa) < 1e-9 * wa) continue;
    const double f = integrator.radial_weight(k);
    out << num(k) << " " << num(f * lorentz_bracket(config.params, k)) << " " << num(f) << "\n";
  }
}

int cmd_epsilon(const Common& common) {
  const RunConfig config = load(common);
  const EpsilonReport report = compute_report(config);
  print_diagnostics(report.diagnostics);
  if (common.plot_data) {
    print_epsilon_plot(std::cout, config);
  } else if (common.json) {
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    print_report(std::cout, report);
  }
  if (!common.csv_path.empty()) {
    std::ofstream csv(common.csv_path);
    if (!csv) throw ValidationError("cannot open " + common.csv_path);
    csv << csv_header() << "\n"
        << csv_row(report.params, &report, report.invariants_pass() ? "ok" : "invariant_error")
        << "\n";
  }
  return report.invariants_pass() ? kOk : kInvariant;
}

// ---- sweep ---------------------------------------------------------------

struct SweepSpec {
  std::string axis;
  double from = 0.0, to = 0.0;
  int points = 10;
  std::string spacing = "log";
};

std::vector<double> sweep_grid(const SweepSpec& s) {
  if (s.points < 1) throw ValidationError("sweep: empty range (points < 1)");
  if (s.points > 1 && !(s.to > s.from)) throw ValidationError("sweep: empty range (to <= from)");
  if (s.spacing == "log" && !(s.from > 0.0)) throw ValidationError("sweep: log spacing needs from > 0");
  std::vector<double> grid;
  for (int i = 0; i < s.points; ++i) {
    const double t = s.points == 1 ? 0.0 : static_cast<double>(i) / (s.points - 1);
    grid.push_back(s.spacing == "log" ? s.from * std::pow(s.to / s.from, t)
                                      : s.from + (s.to - s.from) * t);
  }
  return grid;
}

struct SweepRow {
  SystemParams params;
  std::optional<EpsilonReport> report;
  std::string status = "ok";
  int code = kOk;
};

SweepRow sweep_row(RunConfig config, const std::string& axis, double x) {
  SweepRow row;
  try {
    if (axis == "dipole_d") config.params.mass_m.reset();
    set_config_value(config, axis, num(x));
    row.params = config.params;
    row.report = compute_report(config);
    if (!row.report->invariants_pass()) {
      row.status = "invariant_error";
      row.code = kInvariant;
    }
  } catch (const ValidationError& e) {
    row.status = "validation_error";
    row.code = kValidation;
    std::cerr << axis << " = " << num(x) << ": " << e.what() << "\n";
  } catch (const ConvergenceError& e) {
    row.report.reset();
    row.status = "convergence_error";
    row.code = kConvergence;
    std::cerr << axis << " = " << num(x) << ": " << e.what() << "\n";
  }
  return row;
}

int cmd_sweep(const Common& common, const SweepSpec& spec) {
  const RunConfig config = load(common);
  const auto grid = sweep_grid(spec);

  // Rows run concurrently; output keeps grid order.
  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < grid.size();) rows[i] = sweep_row(config, spec.axis, grid[i]);
    });
  }
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << csv_header() << "\n";
  for (const auto& row : rows) {
    csv << csv_row(row.params, row.report ? &*row.report : nullptr, row.status) << "\n";
  }
  if (!common.csv_path.empty()) {
    std::ofstream file(common.csv_path);
    if (!file) throw ValidationError("cannot open " + common.csv_path);
    file << csv.str();
  }

  if (common.plot_data) {
    std::cout << "# " << spec.axis << " ratio\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::cout << num(grid[i]) << " " << (rows[i].report ? num(rows[i].report->ratio) : "nan")
                << "\n";
    }
  } else if (common.json) {
    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ordered_json entry = {{spec.axis, jnum(grid[i])}, {"status", rows[i].status}};
      if (rows[i].report) entry["report"] = report_json(*rows[i].report);
      out.push_back(entry);
    }
    std::cout << out.dump(2) << "\n";
  } else if (common.csv_path.empty()) {
    std::cout << csv.str();
  }

  int code = kOk;
  for (const auto& row : rows) {
    if (row.code == kInvariant) return kInvariant;
    if (row.code != kOk) code = kConvergence;
  }
  return code;
}

// ---- expand --------------------------------------------------------------

int cmd_expand(const Common& common) {
  const RunConfig config = load(common);
  const KSpaceIntegrator integrator(config.params, config.quadrature);
  const auto series = series_coefficients(integrator);
  const SystemParams& p = config.params;

  if (common.plot_data) {
    std::cout << "# omega B_L order0 order1 order2\n";
    const int points = 400;
    for (int i = 0; i < points; ++i) {
      const double w = 1e-2 * p.omega_a * std::pow(1e4, static_cast<double>(i) / (points - 1));
      if (std::abs(w - p.omega_a) < 1e-3 * p.omega_a) continue;
      std::cout << num(w) << " " << num(lorentz_bracket(p, w));
      for (int order = 0; order <= 2; ++order) std::cout << " " << num(expansion_term(p, w, order));
      std::cout << "\n";
    }
    return kOk;
  }
  if (common.json) {
    ordered_json out = {{"params", params_json(p)},
                        {"c0", jresult(series.c0)},
                        {"c1", jresult(series.c1)},
                        {"c2", jresult(series.c2)},
                        {"closed_form", {{"c0", jnum(kSeriesC0)}, {"c1", jnum(kSeriesC1)},
                                         {"c2", jnum(kSeriesC2)}}}};
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  print_params(std::cout, p);
  std::cout << "series           value             error             closed form\n";
  const std::pair<const char*, std::pair<const IntegralResult*, double>> rows[] = {
      {"c0", {&series.c0, kSeriesC0}}, {"c1", {&series.c1, kSeriesC1}}, {"c2", {&series.c2, kSeriesC2}}};
  for (const auto& [name, entry] : rows) {
    std::cout << "  " << std::left << std::setw(15) << name << std::setw(18)
              << num(entry.first->value) << std::setw(18) << num(entry.first->error)
              << num(entry.second) << "\n";
  }
  return kOk;
}

// ---- check ---------------------------------------------------------------

int cmd_check(const Common& common, bool corrupt_metric, bool corrupt_subsidiary) {
  const RunConfig config = load(common);
  SuiteOptions options;
  options.seed = config.seed;
  options.per_k_samples = config.per_k_samples;
  options.per_k_tolerance = config.tolerances.per_k;
  options.corrupt_metric = corrupt_metric;
  options.corrupt_subsidiary = corrupt_subsidiary;
  print_diagnostics(validate(config.params));
  const auto results = run_all_suites(config.params, options);
  const bool all_pass =
      std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.pass; });

  if (common.json) {
    ordered_json suites = ordered_json::array();
    for (const auto& r : results) {
      suites.push_back({{"name", r.name},
                        {"pass", r.pass},
                        {"checks", r.checks},
                        {"worst", jnum(r.worst)},
                        {"failures", r.failures}});
    }
    std::cout << ordered_json{{"seed", config.seed}, {"pass", all_pass}, {"suites", suites}}.dump(2)
              << "\n";
  } else {
    std::cout << "seed " << config.seed << "\n";
    for (const auto& r : results) {
      std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] " << std::left << std::setw(30) << r.name
                << "checks " << std::setw(8) << r.checks << "worst " << num(r.worst) << "\n";
      for (const auto& f : r.failures) std::cout << "    " << f << "\n";
    }
  }
  return all_pass ? kOk : kInvariant;
}

// ---- oracle --------------------------------------------------------------

int cmd_oracle(const Common& common) {
  const RunConfig config = load(common);
  print_diagnostics(validate(config.params));
  const auto& o = config.oracle;
  const auto registry = default_oracle_registry(o.k_longitudinal, o.k_scalar, o.weight, o.truncation);
  const auto report = oracle_scaling(config.params, registry);

  if (common.json) {
    ordered_json points = ordered_json::array();
    for (const auto& p : report.points) {
      points.push_back({{"charge", jnum(p.charge)},
                        {"perturbative", {jnum(p.perturbative.real()), jnum(p.perturbative.imag())}},
                        {"exact", {jnum(p.exact.real()), jnum(p.exact.imag())}},
                        {"residual", jnum(p.residual)}});
    }
    std::cout << ordered_json{{"points", points},
                              {"exponent", report.exact ? nullptr : jnum(report.exponent)},
                              {"exact", report.exact},
                              {"max_imag_eigenvalue", jnum(report.max_imag_eigenvalue)},
                              {"pass", report.pass}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << std::left << std::setw(16) << "charge" << std::setw(34) << "eps_perturbative (re im)"
              << std::setw(34) << "eps_exact (re im)" << "residual\n";
    for (const auto& p : report.points) {
      std::cout << std::left << std::setw(16) << num(p.charge) << std::setw(34)
                << (num(p.perturbative.real()) + " " + num(p.perturbative.imag())) << std::setw(34)
                << (num(p.exact.real()) + " " + num(p.exact.imag())) << num(p.residual) << "\n";
    }
    if (report.exact) {
      std::cout << "exact: every residual is zero\n";
    } else {
      std::cout << "exponent " << num(report.exponent) << " (expected " << num(kScalingExponent)
                << " +- " << num(kScalingTolerance) << ")\n";
    }
    std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  }
  return report.pass ? kOk : kInvariant;
}

void add_common(CLI::App* cmd, Common& common, bool csv) {
  cmd->add_option("--config", common.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--json", common.json, "machine-readable output");
  cmd->add_option("--seed", common.seed, "seed for random samples");
  cmd->add_flag("--plot-data", common.plot_data, "emit whitespace-separated columns for plotting");
  if (csv) cmd->add_option("--csv", common.csv_path, "write CSV rows to PATH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauge comparison of the resonant excitation-transfer amplitude"};
  app.require_subcommand(1);

  Common common;
  SweepSpec sweep;
  bool corrupt_metric = false, corrupt_subsidiary = false;

  auto* epsilon = app.add_subcommand("epsilon", "Coulomb, Lorentz and transformed amplitudes");
  add_common(epsilon, common, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon over a parameter grid, as CSV");
  add_common(sweep_cmd, common, true);
  sweep_cmd->add_option("--axis", sweep.axis, "parameter to vary")
      ->required()
      ->check(CLI::IsMember({"delta_e", "separation_l", "dipole_d"}));
  sweep_cmd->add_option("--from", sweep.from)->required();
  sweep_cmd->add_option("--to", sweep.to)->required();
  sweep_cmd->add_option("--points", sweep.points, "number of grid points")->capture_default_str();
  sweep_cmd->add_option("--spacing", sweep.spacing)
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  auto* expand = app.add_subcommand("expand", "series coefficients c0, c1, c2");
  add_common(expand, common, false);
  auto* check = app.add_subcommand("check", "invariant suites");
  add_common(check, common, false);
  check->add_flag("--corrupt-metric", corrupt_metric, "negative control: scalar metric sign +1");
  check->add_flag("--corrupt-subsidiary", corrupt_subsidiary,
                  "negative control: a_l^+ + a_s^+ in the residual coupling");
  auto* oracle = app.add_subcommand("oracle", "perturbation theory against exact diagonalization");
  add_common(oracle, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*epsilon) return cmd_epsilon(common);
    if (*sweep_cmd) return cmd_sweep(common, sweep);
    if (*expand) return cmd_expand(common);
    if (*check) return cmd_check(common, corrupt_metric, corrupt_subsidiary);
    if (*oracle) return cmd_oracle(common);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what();
    if (e.estimate() != 0.0) std::cerr << " (estimate " << num(e.estimate()) << ")";
    std::cerr << "\n";
    return kConvergence;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kValidation;
}
