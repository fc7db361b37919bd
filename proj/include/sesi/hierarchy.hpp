#ifndef SESI_HIERARCHY_HPP
#define SESI_HIERARCHY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sesi/phase.hpp"

// Explicit symmetric splitting for Hamiltonians of the form
//
//   H(q, p) = sum_i K_i(q_1, ..., q_{i-1}, p_i) + V(q)
//
// Coordinates are advanced in ascending index order (each K_i only needs the
// earlier coordinates, already at the half step), and in the mirrored half
// the momenta are advanced in descending order (dH/dq_i only involves p_j
// with j > i, already at the full step). The sphere Hamiltonian is the case
// q = (theta_1, phi_1, theta_2, phi_2, ...).

namespace sesi {

/// Coordinates q and momenta p, both of length d. Indices are 0-based.
struct FlatState {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> p;
};

/// One kinetic term K_i. Evaluators receive the whole state; they are
/// required to read only q[0..i) and p[i], which validate_hierarchy audits.
struct KineticTerm {
  std::function<double(std::span<const double> q, std::span<const double> p)> value;
  /// dK_i/dp_i.
  std::function<double(std::span<const double> q, std::span<const double> p)> d_dp;
  /// Writes dK_i/dq_j for every j < i into grad (grad.size() == i).
  std::function<void(std::span<const double> q, std::span<const double> p, std::span<double> grad)>
      d_dq;
};

struct PotentialTerm {
  std::function<double(std::span<const double> q)> value;
  /// Writes dV/dq_j for all j.
  std::function<void(std::span<const double> q, std::span<double> grad)> gradient;
};

struct HierarchicalHamiltonian {
  std::size_t dimension = 0;
  std::vector<KineticTerm> kinetic;
  PotentialTerm potential;
  /// Probe distribution for the dependency audit; uniform on [-1, 1] if empty.
  std::function<FlatState(std::mt19937_64&)> sampler;

  [[nodiscard]] double value(const FlatState& s) const;
};

struct HierarchyViolation {
  std::size_t term = 0;
  bool momentum = false;  // whether the stray read was a momentum
  std::size_t variable = 0;

  /// 1-based, e.g. "K_2 depends on p_1".
  [[nodiscard]] std::string describe() const;
};

/// Perturbs every excluded variable of every K_i on `probes` random states and
/// reports the first term whose value changes at all.
[[nodiscard]] std::optional<HierarchyViolation> validate_hierarchy(
    const HierarchicalHamiltonian& h, int probes, std::uint64_t seed = 20240611);

/// Second-order explicit symmetric step. Throws structure_error when the
/// declared sizes disagree with the state.
[[nodiscard]] FlatState hierarchical_step2(const FlatState& s, const HierarchicalHamiltonian& h,
                                           double tau);

/// Yoshida triple concatenation of hierarchical_step2.
[[nodiscard]] FlatState hierarchical_step4(const FlatState& s, const HierarchicalHamiltonian& h,
                                           double tau);

/// Owns a Hamiltonian that passed the dependency audit.
class HierarchicalStepper {
 public:
  /// Throws structure_error carrying the violation when the audit fails.
  explicit HierarchicalStepper(HierarchicalHamiltonian h, int probes = 16);

  [[nodiscard]] const HierarchicalHamiltonian& hamiltonian() const noexcept { return h_; }
  [[nodiscard]] FlatState step2(const FlatState& s, double tau) const;
  [[nodiscard]] FlatState step4(const FlatState& s, double tau) const;

 private:
  HierarchicalHamiltonian h_;
};

/// The sphere Hamiltonian as kinetic terms K_{2k}(p_theta_k) and
/// K_{2k+1}(theta_k, p_phi_k) with the pair potential as V.
[[nodiscard]] HierarchicalHamiltonian sphere_hierarchy(const SphereParams& params);

[[nodiscard]] FlatState to_hierarchical(const PhaseState& s);
[[nodiscard]] PhaseState from_hierarchical(const FlatState& s);

}  // namespace sesi

#endif  // SESI_HIERARCHY_HPP
