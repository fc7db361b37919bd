#include "sesi/phase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sesi/errors.hpp"

namespace sesi {

void SphereParams::validate() const {
  if (n_bodies < 1) throw config_error("n_bodies must be at least 1");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw config_error("mass must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw config_error("radius must be positive");
  if (!(theta0 > 0.0 && theta0 < std::numbers::pi)) throw config_error("theta0 must lie in (0, pi)");
}

double state_distance(const PhaseState& a, const PhaseState& b) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << "state_distance: body counts differ (" << a.size() << " vs " << b.size() << ")";
    throw dimension_error(msg.str());
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.bodies[i];
    const auto& y = b.bodies[i];
    d = std::max({d, std::abs(x.theta - y.theta), std::abs(x.phi - y.phi),
                  std::abs(x.p_theta - y.p_theta), std::abs(x.p_phi - y.p_phi)});
  }
  return d;
}

const char* to_string(StateField field) noexcept {
  switch (field) {
    case StateField::theta: return "theta";
    case StateField::phi: return "phi";
    case StateField::p_theta: return "p_theta";
    case StateField::p_phi: return "p_phi";
  }
  return "?";
}

std::optional<StateViolation> validate_state(const PhaseState& s, const SphereParams& params) {
  if (s.size() != params.n_bodies) {
    return StateViolation{0, StateField::theta, "body count does not match n_bodies"};
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& b = s.bodies[i];
    const std::pair<StateField, double> fields[] = {{StateField::theta, b.theta},
                                                    {StateField::phi, b.phi},
                                                    {StateField::p_theta, b.p_theta},
                                                    {StateField::p_phi, b.p_phi}};
    for (const auto& [field, value] : fields) {
      if (!std::isfinite(value)) return StateViolation{i, field, "non-finite value"};
    }
    if (std::abs(std::sin(b.theta)) < kPoleGuard) {
      return StateViolation{i, StateField::theta, "pole proximity"};
    }
  }
  return std::nullopt;
}

std::vector<double> to_flat(const PhaseState& s) {
  std::vector<double> z;
  z.reserve(4 * s.size());
  for (const auto& b : s.bodies) {
    z.insert(z.end(), {b.theta, b.phi, b.p_theta, b.p_phi});
  }
  return z;
}

void assign_flat(PhaseState& s, std::span<const double> flat) {
  if (flat.size() != 4 * s.size()) throw dimension_error("assign_flat: length mismatch");
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto& b = s.bodies[i];
    b.theta = flat[4 * i];
    b.phi = flat[4 * i + 1];
    b.p_theta = flat[4 * i + 2];
    b.p_phi = flat[4 * i + 3];
  }
}

}  // namespace sesi
