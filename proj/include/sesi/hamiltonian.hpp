#ifndef SESI_HAMILTONIAN_HPP
#define SESI_HAMILTONIAN_HPP

#include <span>
#include <vector>

#include "sesi/phase.hpp"

namespace sesi {

/// The five per-body derivative families consumed by the splitting schemes.
struct Partials {
  std::vector<double> dh1_dp_theta;
  std::vector<double> dh2_dp_phi;
  std::vector<double> dh2_dtheta;
  std::vector<double> dh3_dtheta;
  std::vector<double> dh3_dphi;
};

/// H = H1(p_theta) + H2(theta, p_phi) + H3(theta, phi).
///
/// Implementations must respect the dependency split: H1 may only read the
/// p_theta components, H2 only theta and p_phi, H3 only theta and phi. The
/// explicit steppers rely on this to evaluate each sub-flow in closed form.
/// Output spans have one entry per body.
class SplitHamiltonian {
 public:
  virtual ~SplitHamiltonian() = default;

  [[nodiscard]] virtual double h1(const PhaseState& s) const = 0;
  [[nodiscard]] virtual double h2(const PhaseState& s) const = 0;
  [[nodiscard]] virtual double h3(const PhaseState& s) const = 0;

  virtual void dh1_dp_theta(const PhaseState& s, std::span<double> out) const = 0;
  virtual void dh2_dp_phi(const PhaseState& s, std::span<double> out) const = 0;
  virtual void dh2_dtheta(const PhaseState& s, std::span<double> out) const = 0;
  virtual void dh3(const PhaseState& s, std::span<double> dtheta, std::span<double> dphi) const = 0;

  [[nodiscard]] double value(const PhaseState& s) const { return h1(s) + h2(s) + h3(s); }
  [[nodiscard]] Partials partials(const PhaseState& s) const;
};

/// N equal masses on a sphere with the three-body benchmark pair potential.
///
///   H1 = sum_i p_theta_i^2 / 2m
///   H2 = sum_i p_phi_i^2 / (2m sin^2 theta_i)
///   H3 = sum_{i<j} V(L_ij),  V(L) = ((sqrt(1 - x^2) - cos theta0) / x)^2,
///        x = 2 sin(L / 2R) / sqrt(3)
///
/// Each unordered pair contributes once. Kinetic evaluations throw
/// singularity_error within kPoleGuard of a pole.
class SphereNBodyHamiltonian : public SplitHamiltonian {
 public:
  explicit SphereNBodyHamiltonian(SphereParams params);

  [[nodiscard]] const SphereParams& params() const noexcept { return params_; }

  [[nodiscard]] double h1(const PhaseState& s) const override;
  [[nodiscard]] double h2(const PhaseState& s) const override;
  [[nodiscard]] double h3(const PhaseState& s) const override;

  void dh1_dp_theta(const PhaseState& s, std::span<double> out) const override;
  void dh2_dp_phi(const PhaseState& s, std::span<double> out) const override;
  void dh2_dtheta(const PhaseState& s, std::span<double> out) const override;
  void dh3(const PhaseState& s, std::span<double> dtheta, std::span<double> dphi) const override;

 private:
  void check_size(const PhaseState& s) const;

  SphereParams params_;
};

/// Great-circle distance via the chord of the embedded points,
/// L = 2R asin(chord / 2R).
[[nodiscard]] double geodesic_distance(const BodyState& a, const BodyState& b, double radius);

/// Pair potential as a function of geodesic separation. Throws domain_error
/// for L <= 0 or when the chord factor exceeds 1 beyond round-off.
[[nodiscard]] double pair_potential(double geodesic, const SphereParams& params);

/// Same potential written in the chord factor x = chord / (sqrt(3) R).
[[nodiscard]] double pair_potential_of_chord_factor(double x, double cos_theta0);

/// dV/dx. Diverges at x = 1, where it throws domain_error.
[[nodiscard]] double pair_potential_slope(double x, double cos_theta0);

[[nodiscard]] double total_energy(const PhaseState& s, const SphereNBodyHamiltonian& h);
[[nodiscard]] Partials partials(const PhaseState& s, const SphereNBodyHamiltonian& h);

}  // namespace sesi

#endif  // SESI_HAMILTONIAN_HPP
