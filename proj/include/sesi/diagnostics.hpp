#ifndef SESI_DIAGNOSTICS_HPP
#define SESI_DIAGNOSTICS_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sesi/hamiltonian.hpp"
#include "sesi/integrators.hpp"
#include "sesi/phase.hpp"

namespace sesi {

using Vec3 = std::array<double, 3>;
using PlanePoint = std::pair<double, double>;

struct DiagnosticsRow {
  double t = 0.0;
  double energy = 0.0;
  double delta_e = 0.0;
  Vec3 l_vec{};
  std::vector<PlanePoint> bodies_xy;
};

/// Total sum_i m r_i x v_i in the embedding frame, with r on the sphere of
/// radius R and velocities theta' = p_theta / m, phi' = p_phi / (m sin^2 theta).
/// Lz reduces to R^2 sum_i p_phi.
[[nodiscard]] Vec3 angular_momentum(const PhaseState& s, const SphereParams& params);

[[nodiscard]] std::vector<PlanePoint> xy_projection(const PhaseState& s, const SphereParams& params);

/// One row per sample, energy deviations taken against the first sample.
/// Works with any SplitHamiltonian; angular momentum uses params.
[[nodiscard]] std::vector<DiagnosticsRow> diagnose_trajectory(std::span<const PhaseState> samples,
                                                              const SplitHamiltonian& h,
                                                              const SphereParams& params);
[[nodiscard]] std::vector<DiagnosticsRow> diagnose_trajectory(std::span<const PhaseState> samples,
                                                              const SphereNBodyHamiltonian& h);

struct ConvergencePoint {
  double tau = 0.0;  // the coarser step of the compared pair
  double diff = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  std::optional<double> slope;  // empty when any diff is zero
};

/// Runs `method` from builder() to t_final with each tau and compares the
/// final states of consecutive runs. taus must be strictly decreasing, at
/// least three, and each must divide t_final.
[[nodiscard]] ConvergenceResult convergence_study(const std::function<PhaseState()>& builder,
                                                  const SplitHamiltonian& h, Method method,
                                                  std::span<const double> taus, double t_final,
                                                  const MidpointSolverConfig& midpoint = {});

/// Ordinary least squares slope of log(y) against log(x).
[[nodiscard]] double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Number of steps of size tau that make up t_final; throws config_error when
/// tau does not divide t_final to round-off.
[[nodiscard]] std::size_t steps_to_reach(double t_final, double tau);

}  // namespace sesi

#endif  // SESI_DIAGNOSTICS_HPP
