#ifndef SESI_ERRORS_HPP
#define SESI_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sesi {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched body counts or vector lengths.
class dimension_error : public error {
 public:
  using error::error;
};

/// Malformed scenario or experiment configuration.
class config_error : public error {
 public:
  using error::error;
};

/// Oracle parameters outside the region where the closed form is valid.
class parameter_error : public error {
 public:
  using error::error;
};

/// The benchmark normalization could not be pinned down.
class calibration_error : public error {
 public:
  using error::error;
};

/// A declared hierarchical Hamiltonian breaks its dependency contract.
class structure_error : public error {
 public:
  using error::error;
};

/// Failures raised while evaluating or advancing a trajectory. Drivers attach
/// the index of the step that failed before rethrowing.
class numerical_error : public error {
 public:
  using error::error;

  [[nodiscard]] std::optional<std::size_t> step() const noexcept { return step_; }
  void set_step(std::size_t step) noexcept { step_ = step; }

 private:
  std::optional<std::size_t> step_;
};

/// A body came within the pole guard (|sin theta| < kPoleGuard).
class singularity_error : public numerical_error {
 public:
  singularity_error(std::size_t body, const std::string& what)
      : numerical_error(what), body_(body) {}
  [[nodiscard]] std::size_t body() const noexcept { return body_; }

 private:
  std::size_t body_;
};

/// Argument outside the domain of an evaluator (coincident bodies etc).
class domain_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// Fixed-point iteration did not reach its tolerance.
class convergence_error : public numerical_error {
 public:
  convergence_error(double residual, const std::string& what)
      : numerical_error(what), residual_(residual) {}
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Adaptive step size collapsed.
class stiffness_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// Quadrature failed to reach its requested accuracy.
class accuracy_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

}  // namespace sesi

#endif  // SESI_ERRORS_HPP
