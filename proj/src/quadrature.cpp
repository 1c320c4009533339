#include "covent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace covent {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Bisection budget for the global adaptive scheme.
constexpr std::size_t kMaxPanels = 20000;

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

const QuadratureRule& cached_gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

struct PanelSum {
  double value;
  double abs_value;
};

PanelSum gl_panel(const RealFunction& f, double a, double b, const QuadratureRule& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double term = rule.w[i] * f(mid + half * rule.x[i]);
    sum += term;
    abs_sum += std::abs(term);
  }
  return {sum * half, abs_sum * half};
}

struct AdaptivePanel {
  double a, b;
  double fine;   // sum over the two halves
  double abs;    // L1 of the halves
  double error;  // |whole - halves|
  bool operator<(const AdaptivePanel& other) const { return error < other.error; }
};

AdaptivePanel evaluate_panel(const RealFunction& f, double a, double b, const QuadratureRule& rule) {
  const double m = 0.5 * (a + b);
  const auto whole = gl_panel(f, a, b, rule);
  const auto left = gl_panel(f, a, m, rule);
  const auto right = gl_panel(f, m, b, rule);
  const double fine = left.value + right.value;
  return {a, b, fine, left.abs_value + right.abs_value, std::abs(fine - whole.value)};
}

// Global adaptive bisection starting from the given breakpoints. Returns the
// accepted panels.
std::vector<AdaptivePanel> adaptive_panels(const RealFunction& f, const std::vector<double>& edges,
                                           const QuadratureConfig& config) {
  const auto& rule = cached_gauss_legendre(config.radial_nodes);
  std::priority_queue<AdaptivePanel> queue;
  double value = 0.0, error = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = evaluate_panel(f, edges[i], edges[i + 1], rule);
    value += p.fine;
    error += p.error;
    abs_sum += p.abs;
    queue.push(p);
  }
  while (queue.size() < kMaxPanels) {
    const double target = std::max(config.rel_tol * std::abs(value), 8.0 * kEps * abs_sum);
    if (error <= target) break;
    auto worst = queue.top();
    // Panels already at rounding level cannot improve.
    if (worst.error <= 4.0 * kEps * worst.abs) break;
    queue.pop();
    const double m = 0.5 * (worst.a + worst.b);
    auto left = evaluate_panel(f, worst.a, m, rule);
    auto right = evaluate_panel(f, m, worst.b, rule);
    value += left.fine + right.fine - worst.fine;
    error += left.error + right.error - worst.error;
    abs_sum += left.abs + right.abs - worst.abs;
    queue.push(left);
    queue.push(right);
  }
  std::vector<AdaptivePanel> out;
  out.reserve(queue.size());
  while (!queue.empty()) {
    out.push_back(queue.top());
    queue.pop();
  }
  std::sort(out.begin(), out.end(),
            [](const AdaptivePanel& l, const AdaptivePanel& r) { return l.a < r.a; });
  return out;
}

std::vector<double> panel_edges(const std::vector<AdaptivePanel>& panels) {
  std::vector<double> edges;
  for (const auto& p : panels) {
    edges.push_back(p.a);
    edges.push_back(p.b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}


IntegralResult summarize(const std::vector<AdaptivePanel>& panels, const QuadratureConfig& config) {
  IntegralResult result;
  double abs_sum = 0.0;
  for (const auto& p : panels) {
    result.value += p.fine;
    result.error += p.error;
    abs_sum += p.abs;
  }
  result.error += kEps * abs_sum;
  result.nodes = panels.size() * 3 * static_cast<std::size_t>(config.radial_nodes);
  return result;
}

std::vector<double> uniform_edges(double a, double b, double max_width) {
  const int count = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
  std::vector<double> edges(count + 1);
  for (int i = 0; i <= count; ++i) edges[i] = a + (b - a) * i / count;
  edges.back() = b;
  return edges;
}

}  // namespace

void validate(const QuadratureConfig& config) {
  if (config.radial_nodes < 2 || config.radial_nodes > 512) {
    throw ValidationError("radial_nodes must lie in [2, 512]");
  }
  if (config.angular_nodes < 2 || config.angular_nodes > 512) {
    throw ValidationError("angular_nodes must lie in [2, 512]");
  }
  if (!(config.kmax_over_invd >= 6.0) || !std::isfinite(config.kmax_over_invd)) {
    throw ValidationError("kmax_over_invd must be at least 6");
  }
  if (!std::isfinite(config.pole_window) || config.pole_window < 0.0) {
    throw ValidationError("pole_window must be finite and non-negative");
  }
  if (!(config.rel_tol > 0.0) || !std::isfinite(config.rel_tol)) {
    throw ValidationError("rel_tol must be positive");
  }
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  return cached_gauss_legendre(n);
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  // Golub-Welsch on the Jacobi matrix of the Hermite recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(0.5 * i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double mu0 = std::sqrt(kPi);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.w[i] = mu0 * v0 * v0;
  }
  return rule;
}

IntegralResult integrate_smooth(const RealFunction& f, double a, double b,
                                const QuadratureConfig& config) {
  validate(config);
  if (!(b > a)) throw ValidationError("integrate_smooth: empty interval");
  const auto panels = adaptive_panels(f, {a, b}, config);
  auto result = summarize(panels, config);
  if (panels.size() >= kMaxPanels) {
    throw ConvergenceError("integrate_smooth: panel budget exhausted", result.error);
  }
  return result;
}

double default_pole_window(double pole, double a, double b) {
  const double edge = std::min(pole - a, b - pole);
  return 0.5 * std::min(0.5 * pole, edge);
}

IntegralResult pv_radial(const RealFunction& numerator, double pole, double a, double b,
                         const QuadratureConfig& config) {
  validate(config);
  if (!(pole > a && pole < b)) {
    throw ValidationError("pv_radial: pole must lie strictly inside the integration domain");
  }
  double w = config.pole_window > 0.0 ? config.pole_window : default_pole_window(pole, a, b);
  if (w <= 0.0 || pole - w < a || pole + w > b) {
    throw ValidationError("pv_radial: pole window does not fit inside the domain");
  }
  const double at_pole = numerator(pole);
  const RealFunction outside = [&](double k) { return numerator(k) / (pole - k); };
  // numerator(pole) * PV Int dk / (pole - k) vanishes on the symmetric window.
  const RealFunction subtracted = [&](double k) {
    return (numerator(k) - at_pole) / (pole - k);
  };

  IntegralResult total;
  auto accumulate = [&](const IntegralResult& part) {
    total.value += part.value;
    total.error += part.error;
    total.nodes += part.nodes;
  };
  if (pole - w > a) accumulate(integrate_smooth(outside, a, pole - w, config));
  accumulate(integrate_smooth(subtracted, pole - w, pole + w, config));
  if (pole + w < b) accumulate(integrate_smooth(outside, pole + w, b, config));
  total.discarded_imag = -kPi * at_pole;
  return total;
}

namespace {

// Fixed composite rule for G(k): even integrand, so only u in [0, 1] is
// sampled, with each panel spanning at most a few oscillation periods.
double angular_value(const SystemParams& params, double k, int panels_per_unit,
                     const QuadratureRule& rule, double* abs_out = nullptr) {
  const double d = params.dipole();
  const double kd2 = (k * d) * (k * d);
  const double kl = k * params.separation_l;
  double sum = 0.0, abs_sum = 0.0;
  for (int p = 0; p < panels_per_unit; ++p) {
    const double a = static_cast<double>(p) / panels_per_unit;
    const double b = static_cast<double>(p + 1) / panels_per_unit;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double u = mid + half * rule.x[i];
      const double term = rule.w[i] * half * u * u * std::exp(-kd2 * u * u) * std::cos(kl * u);
      sum += term;
      abs_sum += std::abs(term);
    }
  }
  if (abs_out) *abs_out = 4.0 * kPi * abs_sum;
  return 4.0 * kPi * sum;
}

int angular_panels(const SystemParams& params, double k) {
  // Six periods of cos(k L u) per panel.
  const double periods = k * params.separation_l / (2.0 * kPi);
  return std::max(1, static_cast<int>(std::ceil(periods / 6.0)));
}

}  // namespace

AngularResult angular_reduce(const SystemParams& params, double k, const QuadratureConfig& config) {
  validate(config);
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("angular_reduce: k must be positive");
  const auto& rule = cached_gauss_legendre(config.angular_nodes);
  const int panels = angular_panels(params, k);
  double abs_sum = 0.0;
  const double coarse = angular_value(params, k, panels, rule);
  const double fine = angular_value(params, k, 2 * panels, rule, &abs_sum);
  const double error = std::abs(fine - coarse) + kEps * abs_sum;
  if (error > std::max(config.rel_tol * std::abs(fine), 64.0 * kEps * abs_sum)) {
    throw ConvergenceError("angular_reduce: composite rule did not converge", error);
  }
  return {fine, error};
}

KSpaceIntegrator::KSpaceIntegrator(const SystemParams& params, const QuadratureConfig& config)
    : params_(params), config_(config) {
  validate(params_);
  validate(config_);
  const double d = params_.dipole();
  cutoff_ = config_.kmax_over_invd / d;
  pole_ = params_.omega_a;
  window_ = config_.pole_window > 0.0 ? config_.pole_window
                                      : default_pole_window(pole_, 0.0, cutoff_);
  if (!(pole_ + window_ < cutoff_) || !(pole_ - window_ > 0.0)) {
    throw ValidationError("radial cutoff too small: the pole window must lie inside (0, K)");
  }
  scale_ = -params_.charge_q * params_.charge_q /
           (params_.delta_e() * std::pow(2.0 * kPi, 3)) * d * d;

  const auto& angular_rule = cached_gauss_legendre(config_.angular_nodes);
  // Refinement and grid filling visit the same nodes.
  std::unordered_map<double, double> memo;
  const RealFunction weight = [&](double k) {
    auto [it, inserted] = memo.try_emplace(k, 0.0);
    if (inserted) {
      it->second = k * k * angular_value(params_, k, angular_panels(params_, k), angular_rule);
    }
    return it->second;
  };
  f_pole_ = weight(pole_);

  // Initial panels span one period of cos(k L) and at most 1/d.
  const double width = std::min(2.0 * kPi / params_.separation_l, 1.0 / d);
  std::vector<double> lower = uniform_edges(0.0, pole_ - window_, width);
  std::vector<double> window_edges = {pole_ - window_, pole_, pole_ + window_};
  std::vector<double> upper = uniform_edges(pole_ + window_, cutoff_, width);

  // Refine on F itself. In the window the pole-free subtracted form of every
  // bracket inherits F's smoothness. Outside it, refine once more on
  // F / (omega_A - k) so the flanks of the pole are resolved.
  const RealFunction flank = [&](double k) { return weight(k) / (pole_ - k); };
  for (const auto* edges : {&lower, &window_edges, &upper}) {
    const bool in_window = edges == &window_edges;
    auto accepted = adaptive_panels(weight, *edges, config_);
    if (!in_window) accepted = adaptive_panels(flank, panel_edges(accepted), config_);
    for (const auto& p : accepted) panels_.push_back({p.a, p.b, in_window});
  }

  const auto& rule = cached_gauss_legendre(config_.radial_nodes);
  auto fill = [&](Grid& grid, double a, double b, bool in_window) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double k = mid + half * rule.x[i];
      grid.k.push_back(k);
      grid.w.push_back(rule.w[i] * half);
      grid.f.push_back(weight(k));
      grid.in_window.push_back(in_window);
    }
  };
  for (const auto& p : panels_) {
    const double m = 0.5 * (p.a + p.b);
    fill(coarse_, p.a, p.b, p.in_window);
    fill(fine_, p.a, m, p.in_window);
    fill(fine_, m, p.b, p.in_window);
  }
}

double KSpaceIntegrator::radial_weight(double k) const {
  const auto& rule = cached_gauss_legendre(config_.angular_nodes);
  return k * k * angular_value(params_, k, angular_panels(params_, k), rule);
}

double KSpaceIntegrator::sum(const Grid& grid, const RadialBracket& bracket,
                             double& abs_sum) const {
  const double pole_term = bracket.pole_numerator ? f_pole_ * bracket.pole_numerator(pole_) : 0.0;
  double total = 0.0;
  abs_sum = 0.0;
  for (std::size_t i = 0; i < grid.k.size(); ++i) {
    const double k = grid.k[i];
    double value = bracket.regular ? grid.f[i] * bracket.regular(k) : 0.0;
    if (bracket.pole_numerator) {
      const double numerator = grid.f[i] * bracket.pole_numerator(k);
      value += grid.in_window[i] ? (numerator - pole_term) / (pole_ - k) : numerator / (pole_ - k);
    }
    const double term = grid.w[i] * value;
    total += term;
    abs_sum += std::abs(term);
  }
  return total;
}

IntegralResult KSpaceIntegrator::integrate(const RadialBracket& bracket) const {
  double abs_coarse = 0.0, abs_fine = 0.0;
  const double coarse = sum(coarse_, bracket, abs_coarse);
  const double fine = sum(fine_, bracket, abs_fine);
  IntegralResult result;
  result.value = fine;
  result.error = std::abs(fine - coarse) + kEps * abs_fine;
  result.nodes = coarse_.k.size() + fine_.k.size();
  if (bracket.pole_numerator) {
    result.discarded_imag = -kPi * f_pole_ * bracket.pole_numerator(pole_);
  }
  return result;
}

double epsilon_coulomb_closed_form(const SystemParams& params) {
  const double d = params.dipole(), q = params.charge_q, l = params.separation_l;
  return d * d * q * q / (2.0 * kPi * params.delta_e() * l * l * l);
}

double epsilon_lorentz_series_prediction(const SystemParams& params) {
  const double de = params.delta_e();
  return epsilon_coulomb_closed_form(params) *
         (kSeriesC0 + kSeriesC1 * de / params.omega_l() +
          kSeriesC2 * (de / params.omega_a) * (de / params.omega_a));
}

IntegralResult to_amplitude(const KSpaceIntegrator& integrator, IntegralResult radial,
                            const char* what) {
  const double scale = integrator.amplitude_scale();
  radial.value *= scale;
  radial.error *= std::abs(scale);
  radial.discarded_imag *= scale;
  if (!(radial.error <= integrator.config().rel_tol * std::abs(radial.value))) {
    throw ConvergenceError(std::string(what) + ": error estimate above rel_tol", radial.error);
  }
  return radial;
}

namespace {

// Lorentz bracket written as R(k) / (omega_A - k).
RealFunction lorentz_pole_numerator(const SystemParams& params) {
  const double wa = params.omega_a, wb = params.omega_b, de = params.delta_e();
  return [=](double k) { return 0.5 * (wa * wb - k * k) * (2.0 * k + de) / (k * (wb + k)); };
}

}  // namespace

IntegralResult epsilon_coulomb(const KSpaceIntegrator& integrator) {
  return to_amplitude(integrator, integrator.integrate({[](double) { return 1.0; }, {}}),
                      "epsilon_coulomb");
}

IntegralResult epsilon_lorentz(const KSpaceIntegrator& integrator) {
  return to_amplitude(integrator,
                      integrator.integrate({{}, lorentz_pole_numerator(integrator.params())}),
                      "epsilon_lorentz");
}

IntegralResult epsilon_coulomb(const SystemParams& params, const QuadratureConfig& config) {
  validate(params);
  return epsilon_coulomb(KSpaceIntegrator(params, config));
}

IntegralResult epsilon_lorentz(const SystemParams& params, const QuadratureConfig& config) {
  validate(params);
  return epsilon_lorentz(KSpaceIntegrator(params, config));
}

SeriesCoefficients series_coefficients(const SystemParams& params,
                                       const QuadratureConfig& config) {
  validate(params);
  return series_coefficients(KSpaceIntegrator(params, config));
}

SeriesCoefficients series_coefficients(const KSpaceIntegrator& integrator) {
  const auto& params = integrator.params();
  const double wa = params.omega_a, l = params.separation_l;
  // Radial integral of the closed-form Coulomb amplitude, per d^2.
  const double reference = -4.0 * kPi * kPi / (l * l * l);

  auto normalized = [&](IntegralResult r, double units) {
    r.value /= reference * units;
    r.error /= std::abs(reference * units);
    r.discarded_imag /= reference * units;
    return r;
  };
  SeriesCoefficients out;
  out.c0 = normalized(integrator.integrate({[](double) { return 1.0; }, {}}), 1.0);
  // First-order term per unit dE: (wa^2 + k^2) / (2 k (wa + k)) / (wa - k).
  out.c1 = normalized(
      integrator.integrate({{}, [=](double k) { return 0.5 * (wa * wa + k * k) / (k * (wa + k)); }}),
      1.0 / params.omega_l());
  // Second-order term per unit dE^2: 1 / (2 (wa + k)^2).
  out.c2 = normalized(
      integrator.integrate({[=](double k) { return 0.5 / ((wa + k) * (wa + k)); }, {}}),
      1.0 / (wa * wa));
  return out;
}

}  // namespace covent
