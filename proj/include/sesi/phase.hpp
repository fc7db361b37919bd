#ifndef SESI_PHASE_HPP
#define SESI_PHASE_HPP

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sesi {

/// Kinetic evaluations are refused when |sin(theta)| drops below this.
inline constexpr double kPoleGuard = 1e-8;

struct SphereParams {
  std::size_t n_bodies = 3;
  double mass = 1.0;
  double radius = 1.0;
  double theta0 = std::numbers::pi / 4.0;  // equilibrium colatitude of the pair potential

  /// Throws config_error when any field is out of range.
  void validate() const;
};

/// Canonical coordinates of one body. phi is kept unwrapped.
struct BodyState {
  double theta = 0.0;
  double phi = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;

  friend bool operator==(const BodyState&, const BodyState&) = default;
};

struct PhaseState {
  double t = 0.0;
  std::vector<BodyState> bodies;

  [[nodiscard]] std::size_t size() const noexcept { return bodies.size(); }

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Max-norm over all 4N canonical components (time is not compared).
/// Throws dimension_error on mismatched body counts.
[[nodiscard]] double state_distance(const PhaseState& a, const PhaseState& b);

enum class StateField { theta, phi, p_theta, p_phi };

[[nodiscard]] const char* to_string(StateField field) noexcept;

struct StateViolation {
  std::size_t body = 0;
  StateField field = StateField::theta;
  std::string reason;
};

/// Empty when the state is usable by every kinetic evaluation; otherwise the
/// first offending body and field.
[[nodiscard]] std::optional<StateViolation> validate_state(const PhaseState& s,
                                                           const SphereParams& params);

/// Per-body interleaved layout (theta, phi, p_theta, p_phi, theta, ...).
[[nodiscard]] std::vector<double> to_flat(const PhaseState& s);
void assign_flat(PhaseState& s, std::span<const double> flat);

}  // namespace sesi

#endif  // SESI_PHASE_HPP
