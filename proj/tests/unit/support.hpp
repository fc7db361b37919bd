#ifndef SESI_TESTS_SUPPORT_HPP
#define SESI_TESTS_SUPPORT_HPP

#include <array>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "sesi/hamiltonian.hpp"
#include "sesi/phase.hpp"

namespace sesi::test {

inline constexpr double kPi = std::numbers::pi;

inline std::array<double, 3> embed(const BodyState& b, double radius) {
  return {radius * std::sin(b.theta) * std::cos(b.phi), radius * std::sin(b.theta) * std::sin(b.phi),
          radius * std::cos(b.theta)};
}

inline double chord(const BodyState& a, const BodyState& b, double radius) {
  const auto ra = embed(a, radius);
  const auto rb = embed(b, radius);
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) sum += (ra[k] - rb[k]) * (ra[k] - rb[k]);
  return std::sqrt(sum);
}

/// Random non-singular state with every pair's chord factor in [0.3, 0.95],
/// away from both divergences of the pair potential.
inline PhaseState random_state(std::mt19937_64& rng, std::size_t n, double radius = 1.0,
                               double momentum = 0.5) {
  std::uniform_real_distribution<double> theta(0.5, kPi - 0.5), phi(-kPi, kPi),
      p(-momentum, momentum);
  for (;;) {
    PhaseState s;
    s.t = 0.0;
    for (std::size_t i = 0; i < n; ++i) s.bodies.push_back({theta(rng), phi(rng), p(rng), p(rng)});
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        const double x = chord(s.bodies[i], s.bodies[j], radius) / (std::sqrt(3.0) * radius);
        ok = x > 0.3 && x < 0.95;
      }
    }
    if (ok) return s;
  }
}

/// Three bodies at a common colatitude, 2 pi / 3 apart.
inline PhaseState symmetric_state(double theta, double p_theta = 0.0, double p_phi = 0.0,
                                  double phi = 0.0) {
  PhaseState s;
  for (int i = 0; i < 3; ++i) s.bodies.push_back({theta, phi + 2.0 * kPi * i / 3.0, p_theta, p_phi});
  return s;
}

/// Pair energy straight from embedded positions.
inline double brute_force_potential(const PhaseState& s, const SphereParams& params) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double c = chord(s.bodies[i], s.bodies[j], params.radius);
      const double geodesic = 2.0 * params.radius * std::asin(c / (2.0 * params.radius));
      const double x = std::min(1.0, 2.0 * std::sin(geodesic / (2.0 * params.radius)) / std::sqrt(3.0));
      const double g = (std::sqrt(1.0 - x * x) - std::cos(params.theta0)) / x;
      sum += g * g;
    }
  }
  return sum;
}

/// H3 = 0, leaving the free motion on the sphere.
class FreeSphere : public SphereNBodyHamiltonian {
 public:
  using SphereNBodyHamiltonian::SphereNBodyHamiltonian;
  double h3(const PhaseState&) const override { return 0.0; }
  void dh3(const PhaseState&, std::span<double> dtheta, std::span<double> dphi) const override {
    std::fill(dtheta.begin(), dtheta.end(), 0.0);
    std::fill(dphi.begin(), dphi.end(), 0.0);
  }
};

/// H3 shifted by a constant; dynamics unchanged.
class ShiftedSphere : public SphereNBodyHamiltonian {
 public:
  ShiftedSphere(SphereParams params, double shift) : SphereNBodyHamiltonian(params), shift_(shift) {}
  double h3(const PhaseState& s) const override { return SphereNBodyHamiltonian::h3(s) + shift_; }

 private:
  double shift_;
};

/// Central-difference Jacobian of a flat map, h = 1e-6.
inline std::vector<std::vector<double>> jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& map,
    const std::vector<double>& z, double h = 1e-6) {
  const std::size_t n = z.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    auto plus = z;
    auto minus = z;
    plus[c] += h;
    minus[c] -= h;
    const auto fp = map(plus);
    const auto fm = map(minus);
    for (std::size_t r = 0; r < n; ++r) m[r][c] = (fp[r] - fm[r]) / (2.0 * h);
  }
  return m;
}

/// max row sum of |M^T J M - J|. `coordinate(k)` tells whether flat index k
/// is a coordinate; `partner(k)` gives its conjugate index.
inline double symplectic_defect(const std::vector<std::vector<double>>& m,
                                const std::function<bool(std::size_t)>& coordinate,
                                const std::function<std::size_t(std::size_t)>& partner) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> j(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) j[k][partner(k)] = coordinate(k) ? 1.0 : -1.0;
  std::vector<std::vector<double>> jm(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < n; ++k) jm[r][c] += j[r][k] * m[k][c];
  double worst = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += m[k][r] * jm[k][c];
      row += std::abs(v - j[r][c]);
    }
    worst = std::max(worst, row);
  }
  return worst;
}

/// Layout of to_flat: (theta, phi, p_theta, p_phi) per body.
inline bool flat_is_coordinate(std::size_t k) { return k % 4 < 2; }
inline std::size_t flat_partner(std::size_t k) { return k % 4 < 2 ? k + 2 : k - 2; }

}  // namespace sesi::test

#endif  // SESI_TESTS_SUPPORT_HPP
