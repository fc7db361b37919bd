#ifndef SESI_ORACLE_HPP
#define SESI_ORACLE_HPP

#include "sesi/phase.hpp"

// Closed-form reference for the three-fold symmetric three-body orbit.
//
// With theta_i = theta and phi_i = phi + 2 pi i / 3 the system collapses to a
// single degree of freedom with reduced Lagrangian
//
//   theta'^2 + sin^2(theta) phi'^2 - V(theta),  V = (cos theta - cos theta0)^2 / sin^2 theta
//
// in a reduced time s. psi = cos(theta) then oscillates harmonically,
//
//   psi(s) = psi0 / (1 + E0) + A sin(sqrt(1 + E0) s),
//
// with A^2 = (E0 - L^2 - E0 psi0^2 / (1 + E0)) / (1 + E0) and L = sin^2(theta) phi'.
// phi(s) follows by quadrature of L / (1 - psi^2).
//
// The reduced variables relate to the canonical ones through three constants
// fixed by build_benchmark_initial_state:
//   p_theta = momentum_scale * theta',  p_phi = momentum_scale * L,
//   s = time_scale * t,                  H = energy_scale * E0.

namespace sesi {

struct OracleParams {
  double theta0 = 0.0;
  double psi0 = 0.0;  // cos(theta0)
  double E0 = 0.0;
  double L = 0.0;
  double direction = 1.0;  // sign of A; +1 when theta decreases at s = 0

  double momentum_scale = 1.0;
  double time_scale = 1.0;
  double energy_scale = 1.0;

  /// Throws parameter_error if the closed form does not describe a bounded
  /// orbit clear of the poles.
  void validate() const;
};

struct ReducedState {
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
};

inline constexpr double kBenchmarkPTheta = 0.25;
inline constexpr double kBenchmarkPPhi = 0.1727174029854043;
inline constexpr double kDefaultQuadTolerance = 1e-12;

[[nodiscard]] double reduced_potential(double theta, double theta0);
/// U(psi) = V(theta) sin^2(theta) = (psi - psi0)^2.
[[nodiscard]] double reduced_potential_psi(double psi, double psi0);
/// V(theta) + L^2 / sin^2(theta) + theta'^2, conserved along reduced orbits.
[[nodiscard]] double reduced_energy(double theta, double theta_dot, double L, double theta0);

[[nodiscard]] double psi_center(const OracleParams& p);
/// Signed amplitude A.
[[nodiscard]] double psi_amplitude(const OracleParams& p);
[[nodiscard]] double radial_frequency(const OracleParams& p);
/// 2 pi / sqrt(1 + E0), in reduced time.
[[nodiscard]] double radial_period(const OracleParams& p);

/// All time arguments below are reduced time s.
[[nodiscard]] double psi_of_t(const OracleParams& p, double s);
[[nodiscard]] double psi_dot_of_t(const OracleParams& p, double s);
[[nodiscard]] double theta_of_t(const OracleParams& p, double s);

/// phi_at_0 + integral_0^s L / (1 - psi^2). Whole radial periods are taken
/// from one per-period integral; throws accuracy_error if the adaptive
/// Gauss-Kronrod estimate misses quad_tol.
[[nodiscard]] double phi_of_t(const OracleParams& p, double s,
                              double quad_tol = kDefaultQuadTolerance, double phi_at_0 = 0.0);

/// Azimuthal advance over one radial period.
[[nodiscard]] double azimuthal_advance_per_period(const OracleParams& p,
                                                  double quad_tol = kDefaultQuadTolerance);

[[nodiscard]] ReducedState reduced_state(const OracleParams& p, double s,
                                         double quad_tol = kDefaultQuadTolerance,
                                         double phi_at_0 = 0.0);

/// Reduced parameters for a symmetric orbit started at psi_center with the
/// given reduced velocities. theta_dot > 0 means theta grows at s = 0.
/// Throws calibration_error if the implicit energy equation does not settle.
[[nodiscard]] OracleParams reduced_params_from_velocities(double theta0, double theta_dot,
                                                          double L);

/// Momentum scale k such that the orbit with L = p_phi / k advances phi by
/// exactly 2 pi / 6 per radial period.
[[nodiscard]] double calibrate_momentum_scale(double theta0, double p_theta, double p_phi,
                                              double quad_tol = kDefaultQuadTolerance);

struct BenchmarkSetup {
  SphereParams params;  // mass replaced by the calibrated value
  PhaseState state;
  OracleParams oracle;
};

/// Closed six-petal initial condition: three bodies at the oracle's s = 0
/// point with p_theta = 1/4, p_phi = 0.1727174029854043 and phi offsets
/// {0, 2 pi / 3, 4 pi / 3}. Requires n_bodies = 3 and theta0 = pi / 4.
///
/// The calibrated momentum scale k fixes the mass at k^2 / 2 and the time
/// scale at 2 / k; the resulting Hamiltonian equals 3 E0 on symmetric
/// states. Throws calibration_error if that identity fails on the built state.
[[nodiscard]] BenchmarkSetup build_benchmark_initial_state(const SphereParams& params);

/// Full three-body state on the oracle orbit at simulation time t.
[[nodiscard]] PhaseState oracle_phase_state(const OracleParams& p, double phi_at_0, double t,
                                            double quad_tol = kDefaultQuadTolerance);

/// Simulation-time length of one radial period.
[[nodiscard]] double simulation_period(const OracleParams& p);

}  // namespace sesi

#endif  // SESI_ORACLE_HPP
