#include "covent/fock.hpp"

#include <cmath>
#include <string>

namespace covent {

const char* to_string(PolarizationKind kind) noexcept {
  switch (kind) {
    case PolarizationKind::transverse1: return "transverse1";
    case PolarizationKind::transverse2: return "transverse2";
    case PolarizationKind::longitudinal: return "longitudinal";
    case PolarizationKind::scalar: return "scalar";
  }
  return "unknown";
}

ModeRegistry::ModeRegistry(std::vector<PhotonMode> modes, Truncation truncation)
    : modes_(std::move(modes)), truncation_(truncation) {
  if (truncation_.n_max < 1 || truncation_.p_max < 1 || truncation_.max_total_photons < 1) {
    throw ValidationError("truncation bounds must be at least 1");
  }
  if (truncation_.p_max > 255) throw ValidationError("p_max above 255 is not supported");
  for (const auto& m : modes_) {
    if (!(m.omega() > 0.0)) throw ValidationError("photon mode with k = 0");
    if (!(m.weight > 0.0)) throw ValidationError("photon mode weight must be positive");
  }
}

std::optional<std::size_t> ModeRegistry::find(const Vec3& k, PolarizationKind kind) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].kind == kind && modes_[i].k_vector == k) return i;
  }
  return std::nullopt;
}

int OccupationState::total_photons() const noexcept {
  int total = 0;
  for (auto n : photons) total += n;
  return total;
}

int OccupationState::count(PolarizationKind kind, const ModeRegistry& registry) const {
  int total = 0;
  for (std::size_t i = 0; i < photons.size(); ++i) {
    if (registry.mode(i).kind == kind) total += photons[i];
  }
  return total;
}

int Metric::weight(const OccupationState& state, const ModeRegistry& registry) const {
  return state.count(PolarizationKind::scalar, registry) % 2 == 0 ? 1 : scalar_sign;
}

StateVector::StateVector(Registry registry) : registry_(std::move(registry)) {
  if (!registry_) throw std::invalid_argument("StateVector needs a mode registry");
}

StateVector StateVector::basis(Registry registry, OccupationState state, Amplitude amp) {
  if (state.photons.size() != registry->size()) {
    throw RegistryMismatch("occupation state does not match the registry size");
  }
  StateVector out(std::move(registry));
  out.add(state, amp);
  return out;
}

StateVector StateVector::vacuum(Registry registry, int level_a, int level_b) {
  StateVector out(registry);
  out.add(out.empty_state(level_a, level_b), 1.0);
  return out;
}

OccupationState StateVector::empty_state(int level_a, int level_b) const {
  return OccupationState{level_a, level_b, std::vector<std::uint8_t>(registry_->size(), 0)};
}

StateVector::Amplitude StateVector::operator[](const OccupationState& state) const {
  auto it = amps_.find(state);
  return it == amps_.end() ? Amplitude{} : it->second;
}

void StateVector::add(const OccupationState& state, Amplitude amp) {
  if (amp == Amplitude{}) return;
  auto [it, inserted] = amps_.try_emplace(state, amp);
  if (!inserted) it->second += amp;
  if (std::abs(it->second) < kPruneThreshold) amps_.erase(it);
}

void StateVector::check_same_registry(const StateVector& other) const {
  if (registry_ != other.registry_) {
    throw RegistryMismatch("state vectors built on different mode registries");
  }
}

StateVector& StateVector::operator+=(const StateVector& other) {
  check_same_registry(other);
  for (const auto& [state, amp] : other.amps_) add(state, amp);
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  check_same_registry(other);
  for (const auto& [state, amp] : other.amps_) add(state, -amp);
  return *this;
}

StateVector& StateVector::operator*=(Amplitude factor) {
  if (factor == Amplitude{}) {
    amps_.clear();
    return *this;
  }
  for (auto it = amps_.begin(); it != amps_.end();) {
    it->second *= factor;
    it = std::abs(it->second) < kPruneThreshold ? amps_.erase(it) : std::next(it);
  }
  return *this;
}

StateVector operator+(StateVector lhs, const StateVector& rhs) { return lhs += rhs; }
StateVector operator-(StateVector lhs, const StateVector& rhs) { return lhs -= rhs; }
StateVector operator*(StateVector::Amplitude factor, StateVector rhs) { return rhs *= factor; }

namespace {

void check_mode(const StateVector& state, std::size_t mode) {
  if (mode >= state.registry()->size()) {
    throw std::out_of_range("photon mode index " + std::to_string(mode) + " not in registry");
  }
}

}  // namespace

StateVector create(const StateVector& state, std::size_t mode, OnOverflow overflow) {
  check_mode(state, mode);
  const auto& trunc = state.registry()->truncation();
  StateVector out(state.registry());
  for (const auto& [occ, amp] : state) {
    const int n = occ.photons[mode];
    if (n + 1 > trunc.p_max || occ.total_photons() + 1 > trunc.max_total_photons) {
      if (overflow == OnOverflow::project) continue;
      throw TruncationError("creation in mode " + std::to_string(mode) +
                            " exceeds the photon truncation");
    }
    OccupationState next = occ;
    next.photons[mode] = static_cast<std::uint8_t>(n + 1);
    out.add(next, amp * std::sqrt(static_cast<double>(n + 1)));
  }
  return out;
}

StateVector annihilate(const StateVector& state, std::size_t mode) {
  check_mode(state, mode);
  StateVector out(state.registry());
  for (const auto& [occ, amp] : state) {
    const int n = occ.photons[mode];
    if (n == 0) continue;
    OccupationState next = occ;
    next.photons[mode] = static_cast<std::uint8_t>(n - 1);
    out.add(next, amp * std::sqrt(static_cast<double>(n)));
  }
  return out;
}

StateVector metric_create(const StateVector& state, std::size_t mode, const Metric& metric,
                          OnOverflow overflow) {
  // (a^+)_metric = eta a^+ eta, with eta diagonal in the occupation basis.
  // Adding one quantum changes the weight by the mode's own sign.
  StateVector out = create(state, mode, overflow);
  if (state.registry()->mode(mode).kind == PolarizationKind::scalar) {
    out *= static_cast<double>(metric.scalar_sign);
  }
  return out;
}

StateVector apply_oscillator(const StateVector& state, Oscillator osc,
                             const OscillatorMatrix& matrix) {
  const int levels = state.registry()->truncation().n_max + 1;
  if (matrix.rows() != levels || matrix.cols() != levels) {
    throw std::invalid_argument("oscillator matrix does not match the level truncation");
  }
  StateVector out(state.registry());
  for (const auto& [occ, amp] : state) {
    const int from = occ.level(osc);
    for (int to = 0; to < levels; ++to) {
      const auto element = matrix(to, from);
      if (element == std::complex<double>{}) continue;
      OccupationState next = occ;
      next.level(osc) = to;
      out.add(next, amp * element);
    }
  }
  return out;
}

StateVector raise_oscillator(const StateVector& state, Oscillator osc, OnOverflow overflow) {
  const int n_max = state.registry()->truncation().n_max;
  StateVector out(state.registry());
  for (const auto& [occ, amp] : state) {
    const int n = occ.level(osc);
    if (n + 1 > n_max) {
      if (overflow == OnOverflow::project) continue;
      throw TruncationError("oscillator raising exceeds n_max");
    }
    OccupationState next = occ;
    next.level(osc) = n + 1;
    out.add(next, amp * std::sqrt(static_cast<double>(n + 1)));
  }
  return out;
}

StateVector lower_oscillator(const StateVector& state, Oscillator osc) {
  StateVector out(state.registry());
  for (const auto& [occ, amp] : state) {
    const int n = occ.level(osc);
    if (n == 0) continue;
    OccupationState next = occ;
    next.level(osc) = n - 1;
    out.add(next, amp * std::sqrt(static_cast<double>(n)));
  }
  return out;
}

std::complex<double> indefinite_inner(const StateVector& bra, const StateVector& ket,
                                      const Metric& metric) {
  if (bra.registry() != ket.registry()) {
    throw RegistryMismatch("inner product between different mode registries");
  }
  const auto& registry = *ket.registry();
  std::complex<double> sum{};
  for (const auto& [occ, amp] : ket) {
    const auto other = bra[occ];
    if (other == std::complex<double>{}) continue;
    sum += std::conj(other) * amp * static_cast<double>(metric.weight(occ, registry));
  }
  return sum;
}

double ordinary_norm(const StateVector& state) {
  double sum = 0.0;
  for (const auto& [occ, amp] : state) sum += std::norm(amp);
  return std::sqrt(sum);
}

StateVector apply_scalar_sector_identity(const StateVector& vacuum, std::size_t scalar_mode,
                                         const Metric& metric) {
  if (vacuum.registry()->mode(scalar_mode).kind != PolarizationKind::scalar) {
    throw std::invalid_argument("apply_scalar_sector_identity needs a scalar mode");
  }
  for (const auto& [occ, amp] : vacuum) {
    if (occ.total_photons() != 0) {
      throw std::invalid_argument("apply_scalar_sector_identity expects a photon vacuum");
    }
  }
  return annihilate(metric_create(vacuum, scalar_mode, metric), scalar_mode);
}

double check_subsidiary(const StateVector& state, std::size_t longitudinal_mode,
                        std::size_t scalar_mode) {
  const auto& registry = *state.registry();
  if (registry.mode(longitudinal_mode).kind != PolarizationKind::longitudinal ||
      registry.mode(scalar_mode).kind != PolarizationKind::scalar) {
    throw std::invalid_argument("check_subsidiary needs a (longitudinal, scalar) mode pair");
  }
  return ordinary_norm(annihilate(state, longitudinal_mode) - annihilate(state, scalar_mode));
}

}  // namespace covent
