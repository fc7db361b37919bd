#ifndef SESI_SCENARIO_HPP
#define SESI_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sesi/integrators.hpp"
#include "sesi/oracle.hpp"
#include "sesi/phase.hpp"

namespace sesi {

/// Flat JSON experiment description. Unknown keys are rejected.
///
///   n_bodies, mass, radius, theta0       sphere parameters
///   initial                              "benchmark" or [{theta, phi, p_theta, p_phi}, ...]
///   method                               sesi2 | sesi4 | midpoint | dopri45
///   tau, n_steps, sample_every           fixed-step driver (dopri45 samples every tau*sample_every)
///   midpoint_tolerance, midpoint_max_iterations
///   dopri_rel_tol, dopri_abs_tol, dopri_initial_step, dopri_max_step, dopri_safety
///   taus, t_final                        convergence study
///   methods                              comparison
///   periods, samples_per_period, closure_tau, quad_tol   oracle report
struct ScenarioConfig {
  SphereParams params;
  bool mass_given = false;
  bool benchmark_initial = true;
  std::vector<BodyState> initial_bodies;

  Method method = Method::sesi2;
  double tau = 0.1;
  std::size_t n_steps = 8000;
  std::size_t sample_every = 10;
  MidpointSolverConfig midpoint;
  DopriConfig dopri;

  std::vector<double> taus;
  double t_final = 10.0;

  std::vector<Method> methods;

  int periods = 6;
  int samples_per_period = 100;
  double closure_tau = 0.01;
  double quad_tol = kDefaultQuadTolerance;

  nlohmann::json source;  // the parsed document, echoed into output headers
};

/// Throws config_error on type errors, unknown keys or out-of-range values.
[[nodiscard]] ScenarioConfig parse_scenario(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig load_scenario(const std::string& path);

/// Checks the fields the `run` driver uses.
void validate_run_fields(const ScenarioConfig& cfg);

struct InitialCondition {
  SphereParams params;
  PhaseState state;
  std::optional<OracleParams> oracle;  // set for the benchmark recipe
};

/// Builds the starting state. The benchmark recipe replaces the mass with
/// its calibrated value; giving an explicit mass alongside it is an error.
[[nodiscard]] InitialCondition prepare_initial(const ScenarioConfig& cfg);

}  // namespace sesi

#endif  // SESI_SCENARIO_HPP
