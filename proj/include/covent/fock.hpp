#pragma once

// Finite-mode Fock space with the Gupta-Bleuler indefinite metric.
//
// Every polarization kind uses ordinary bosonic ladder operators. The
// indefinite metric enters only through Metric: basis states carry the weight
// (-1)^(scalar photon count), and metric_create() is the adjoint of
// annihilate() with respect to that metric. For scalar modes this makes the
// metric adjoint the negative of the ordinary raising operator, which is what
// produces [a_s, a_s^+] = -1.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "covent/core.hpp"

namespace covent {

enum class PolarizationKind { transverse1, transverse2, longitudinal, scalar };

const char* to_string(PolarizationKind kind) noexcept;

struct PhotonMode {
  Vec3 k_vector{};
  PolarizationKind kind = PolarizationKind::transverse1;
  // d^3k cell volume represented by this mode when a registry discretizes a
  // k-space integral.
  double weight = 1.0;

  double omega() const noexcept { return norm(k_vector); }
};

struct Truncation {
  int n_max = 2;              // highest oscillator level
  int p_max = 2;              // photons per mode
  int max_total_photons = 2;  // photons summed over all modes
};

class ModeRegistry {
 public:
  explicit ModeRegistry(std::vector<PhotonMode> modes, Truncation truncation = {});

  static std::shared_ptr<const ModeRegistry> make(std::vector<PhotonMode> modes,
                                                  Truncation truncation = {}) {
    return std::make_shared<const ModeRegistry>(std::move(modes), truncation);
  }

  std::size_t size() const noexcept { return modes_.size(); }
  const PhotonMode& mode(std::size_t index) const { return modes_.at(index); }
  const std::vector<PhotonMode>& modes() const noexcept { return modes_; }
  const Truncation& truncation() const noexcept { return truncation_; }

  std::optional<std::size_t> find(const Vec3& k, PolarizationKind kind) const;

 private:
  std::vector<PhotonMode> modes_;
  Truncation truncation_;
};

using Registry = std::shared_ptr<const ModeRegistry>;

/// Occupation numbers of both oscillators and every registered photon mode.
struct OccupationState {
  int level_a = 0;
  int level_b = 0;
  std::vector<std::uint8_t> photons;

  int level(Oscillator osc) const noexcept { return osc == Oscillator::A ? level_a : level_b; }
  int& level(Oscillator osc) noexcept { return osc == Oscillator::A ? level_a : level_b; }
  int total_photons() const noexcept;
  int count(PolarizationKind kind, const ModeRegistry& registry) const;

  auto operator<=>(const OccupationState&) const = default;
};

class TruncationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class RegistryMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Metric weights of basis states. scalar_sign = -1 is the physical choice;
/// +1 turns the metric positive definite and exists for negative controls.
struct Metric {
  int scalar_sign = -1;

  int weight(const OccupationState& state, const ModeRegistry& registry) const;
  static Metric corrupted() noexcept { return Metric{+1}; }
};

class StateVector {
 public:
  using Amplitude = std::complex<double>;
  using Storage = std::map<OccupationState, Amplitude>;

  // Amplitudes below this magnitude are dropped.
  static constexpr double kPruneThreshold = 1e-15;

  explicit StateVector(Registry registry);

  static StateVector basis(Registry registry, OccupationState state, Amplitude amp = 1.0);
  /// |level_a, level_b> with no photons.
  static StateVector vacuum(Registry registry, int level_a = 0, int level_b = 0);

  const Registry& registry() const noexcept { return registry_; }
  OccupationState empty_state(int level_a = 0, int level_b = 0) const;

  Amplitude operator[](const OccupationState& state) const;
  void add(const OccupationState& state, Amplitude amp);

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(Amplitude factor);

  std::size_t size() const noexcept { return amps_.size(); }
  bool empty() const noexcept { return amps_.empty(); }
  Storage::const_iterator begin() const noexcept { return amps_.begin(); }
  Storage::const_iterator end() const noexcept { return amps_.end(); }

 private:
  void check_same_registry(const StateVector& other) const;

  Registry registry_;
  Storage amps_;
};

StateVector operator+(StateVector lhs, const StateVector& rhs);
StateVector operator-(StateVector lhs, const StateVector& rhs);
StateVector operator*(StateVector::Amplitude factor, StateVector rhs);

/// Behaviour of raising operators at the truncation boundary. `raise` throws
/// TruncationError; `project` drops the component, which is how truncated
/// Hamiltonians are built.
enum class OnOverflow { raise, project };

/// Ordinary bosonic raising, sqrt(n+1).
StateVector create(const StateVector& state, std::size_t mode,
                   OnOverflow overflow = OnOverflow::raise);
/// Ordinary bosonic lowering, sqrt(n).
StateVector annihilate(const StateVector& state, std::size_t mode);
/// Adjoint of annihilate() under the indefinite metric (the a^+ of the
/// covariant theory). Equals -create() for scalar modes.
StateVector metric_create(const StateVector& state, std::size_t mode, const Metric& metric = {},
                          OnOverflow overflow = OnOverflow::raise);

using OscillatorMatrix = Eigen::MatrixXcd;

/// Applies an operator given by its matrix over levels 0..n_max of one
/// oscillator. Rows index the final level.
StateVector apply_oscillator(const StateVector& state, Oscillator osc,
                             const OscillatorMatrix& matrix);
StateVector raise_oscillator(const StateVector& state, Oscillator osc,
                             OnOverflow overflow = OnOverflow::raise);
StateVector lower_oscillator(const StateVector& state, Oscillator osc);

/// (bra|ket): sum of conj(bra) ket over shared basis states, weighted by the
/// metric sign of each state.
std::complex<double> indefinite_inner(const StateVector& bra, const StateVector& ket,
                                      const Metric& metric = {});
/// Ordinary positive-definite norm.
double ordinary_norm(const StateVector& state);

/// a_s a_s^+ |vacuum> evaluated with the module's conventions; -|vacuum> for
/// the physical metric.
StateVector apply_scalar_sector_identity(const StateVector& vacuum, std::size_t scalar_mode,
                                         const Metric& metric = {});

/// Ordinary norm of (a_l - a_s)|state>. Zero means the photon content
/// satisfies the charge-free subsidiary condition.
double check_subsidiary(const StateVector& state, std::size_t longitudinal_mode,
                        std::size_t scalar_mode);

}  // namespace covent
