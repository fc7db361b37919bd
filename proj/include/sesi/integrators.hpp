#ifndef SESI_INTEGRATORS_HPP
#define SESI_INTEGRATORS_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "sesi/hamiltonian.hpp"
#include "sesi/phase.hpp"

namespace sesi {

/// Sub-step durations of the fourth-order triple concatenation.
struct YoshidaCoefficients {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
};

[[nodiscard]] YoshidaCoefficients yoshida_coefficients(double tau) noexcept;

struct MidpointSolverConfig {
  double tolerance = 1e-13;
  int max_iterations = 50;

  void validate() const;
};

struct MidpointStats {
  int iterations = 0;
  double residual = 0.0;
};

struct DopriConfig {
  double rel_tol = 1e-3;
  double abs_tol = 1e-6;
  double initial_step = 1e-2;
  double max_step = 1.0;
  double safety = 0.9;

  void validate() const;
};

struct DopriStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Second-order explicit symplectic step. Each body is advanced in the order
///   theta half-drift (old p_theta)
///   phi half-drift   (half-step theta, old p_phi)
///   p_phi kick       (dH3/dphi at the half-step coordinates)
///   p_theta kick     (dH3/dtheta plus the mean of dH2/dtheta at old and new p_phi)
///   theta half-drift (new p_theta)
///   phi half-drift   (half-step theta, new p_phi)
/// All bodies move through each line together.
[[nodiscard]] PhaseState sesi2_step(const PhaseState& s, const SplitHamiltonian& h, double tau);

/// sesi2_step composed over the three Yoshida sub-steps.
[[nodiscard]] PhaseState sesi4_step(const PhaseState& s, const SplitHamiltonian& h, double tau);

/// Implicit midpoint rule solved by plain fixed-point iteration on the
/// half-step state. Throws convergence_error after cfg.max_iterations.
[[nodiscard]] PhaseState implicit_midpoint_step(const PhaseState& s, const SplitHamiltonian& h,
                                                double tau, const MidpointSolverConfig& cfg = {},
                                                MidpointStats* stats = nullptr);

/// dz/dt = J grad H in the to_flat layout.
[[nodiscard]] std::vector<double> vector_field(const PhaseState& s, const SplitHamiltonian& h);

/// Adaptive Dormand-Prince 5(4) from s.t to t_end. Samples at s.t + k * sample_every
/// are hit exactly by clipping the step; t_end is always the last sample.
[[nodiscard]] std::vector<PhaseState> dopri45_integrate(const PhaseState& s,
                                                        const SplitHamiltonian& h, double t_end,
                                                        const DopriConfig& cfg,
                                                        double sample_every,
                                                        DopriStats* stats = nullptr);

enum class Method { sesi2, sesi4, midpoint, dopri45 };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
/// Throws config_error for unknown names.
[[nodiscard]] Method parse_method(std::string_view name);

/// Fixed-step driver for sesi2, sesi4 and midpoint. Returns s, every
/// sample_every-th state, and always the final state. A numerical_error
/// thrown by the stepper is rethrown with its step index set.
[[nodiscard]] std::vector<PhaseState> integrate(const PhaseState& s, const SplitHamiltonian& h,
                                                Method method, double tau, std::size_t n_steps,
                                                std::size_t sample_every,
                                                const MidpointSolverConfig& midpoint = {});

/// One step of any fixed-step method.
[[nodiscard]] PhaseState step(Method method, const PhaseState& s, const SplitHamiltonian& h,
                              double tau, const MidpointSolverConfig& midpoint = {});

}  // namespace sesi

#endif  // SESI_INTEGRATORS_HPP
