#ifndef SESI_COMMANDS_HPP
#define SESI_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sesi/diagnostics.hpp"
#include "sesi/scenario.hpp"

namespace sesi::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kPartialFailure = 4,
  kCalibrationError = 5,
};

struct CommandOptions {
  std::optional<std::string> out;  // stdout when empty
  bool quiet = false;
  bool timing = true;  // wall-clock lines in CSV headers
};

struct RunOutput {
  ScenarioConfig scenario;
  SphereParams params;
  std::optional<OracleParams> calibration;
  double wall_seconds = 0.0;
  std::size_t steps = 0;
  std::vector<PhaseState> samples;
  std::vector<DiagnosticsRow> rows;

  [[nodiscard]] double steps_per_second() const {
    return wall_seconds > 0.0 ? static_cast<double>(steps) / wall_seconds : 0.0;
  }
};

/// Integrates and diagnoses one scenario. Wall-clock covers the integration only.
[[nodiscard]] RunOutput execute_run(const ScenarioConfig& cfg);

/// `#` metadata lines, a header row, then one row per sample:
/// t, per-body theta/phi/p_theta/p_phi, E, dE, Lx, Ly, Lz, per-body x/y.
void write_run_csv(std::ostream& out, const RunOutput& run, bool timing);

struct MethodSummary {
  Method method = Method::sesi2;
  bool ok = false;
  std::string message;
  double max_de_first_half = 0.0;
  double max_de_second_half = 0.0;
  Vec3 l_drift{};  // max |L(t) - L(0)| per axis
  double wall_seconds = 0.0;
  double steps_per_second = 0.0;
};

[[nodiscard]] MethodSummary summarize(const RunOutput& run);

struct OracleReport {
  OracleParams oracle;
  SphereParams params;
  double period = 0.0;  // simulation time
  double advance_per_period = 0.0;
  double closure_tau = 0.0;  // effective step landing exactly on the final time
  std::size_t closure_steps = 0;
  double closure_distance = 0.0;
  std::vector<double> t, theta, phi, x, y;
};

[[nodiscard]] OracleReport execute_oracle(const ScenarioConfig& cfg);

int cmd_run(const std::string& config_path, const CommandOptions& opts);
int cmd_converge(const std::string& config_path, const CommandOptions& opts);
int cmd_compare(const std::string& config_path, const CommandOptions& opts);
int cmd_oracle(const std::string& config_path, const CommandOptions& opts);

}  // namespace sesi::cli

#endif  // SESI_COMMANDS_HPP
