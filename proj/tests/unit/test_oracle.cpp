#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sesi/errors.hpp"
#include "sesi/hamiltonian.hpp"
#include "sesi/integrators.hpp"
#include "sesi/oracle.hpp"
#include "support.hpp"

using namespace sesi;
using test::kPi;

namespace {

OracleParams sample_params() {
  auto p = reduced_params_from_velocities(kPi / 4, 0.11, 0.09);
  return p;
}

// Per-period azimuthal advance from the standard integral
//   int_0^{2 pi} dx / (a + b sin x) = 2 pi / sqrt(a^2 - b^2)
// applied to 1 / (1 - psi^2) = (1/(1 - psi) + 1/(1 + psi)) / 2.
double closed_form_advance(const OracleParams& p) {
  const double c = p.psi0 / (1.0 + p.E0);
  const double a2 = (p.E0 - p.L * p.L - p.E0 * p.psi0 * p.psi0 / (1.0 + p.E0)) / (1.0 + p.E0);
  const double omega = std::sqrt(1.0 + p.E0);
  return kPi * p.L / omega *
         (1.0 / std::sqrt((1.0 - c) * (1.0 - c) - a2) + 1.0 / std::sqrt((1.0 + c) * (1.0 + c) - a2));
}

}  // namespace

TEST_CASE("psi at the origin and after one period") {
  const auto p = sample_params();
  CHECK(psi_of_t(p, 0.0) == doctest::Approx(p.psi0 / (1.0 + p.E0)).epsilon(1e-15));
  CHECK(radial_period(p) == doctest::Approx(2.0 * kPi / std::sqrt(1.0 + p.E0)).epsilon(1e-15));
  const double period = radial_period(p);
  for (int k = 0; k < 100; ++k) {
    const double s = 0.173 * k;
    CHECK(std::abs(psi_of_t(p, s + period) - psi_of_t(p, s)) <= 1e-12);
  }
}

TEST_CASE("closed form satisfies the reduced energy equation") {
  for (const auto& p : {sample_params(), reduced_params_from_velocities(0.9, -0.3, 0.2)}) {
    const double period = radial_period(p);
    double worst = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double s = 3.0 * period * k / 10000.0;
      const double psi = psi_of_t(p, s);
      const double rate = psi_dot_of_t(p, s);
      const double rhs = p.E0 - p.L * p.L - p.E0 * psi * psi - reduced_potential_psi(psi, p.psi0);
      worst = std::max(worst, std::abs(rate * rate - rhs));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("psi_dot is the derivative of psi") {
  const auto p = sample_params();
  for (double s : {0.0, 0.4, 2.2, 5.0}) {
    const double fd = (psi_of_t(p, s + 1e-6) - psi_of_t(p, s - 1e-6)) / 2e-6;
    CHECK(psi_dot_of_t(p, s) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("reduced energy identity along the orbit") {
  const auto p = sample_params();
  for (int k = 0; k <= 200; ++k) {
    const auto r = reduced_state(p, 0.05 * k);
    CHECK(std::abs(reduced_energy(r.theta, r.theta_dot, p.L, p.theta0) - p.E0) <= 1e-10);
    const double st = std::sin(r.theta);
    CHECK(std::abs(st * st * r.phi_dot - p.L) <= 1e-12);
  }
}

TEST_CASE("U(psi) equals V(theta) sin^2 theta") {
  for (double theta0 : {0.4, kPi / 4, 2.0}) {
    for (int k = 1; k < 50; ++k) {
      const double theta = kPi * k / 50.0;
      const double st = std::sin(theta);
      CHECK(std::abs(reduced_potential_psi(std::cos(theta), std::cos(theta0)) -
                     reduced_potential(theta, theta0) * st * st) <= 1e-14);
    }
  }
}

TEST_CASE("azimuth: zero angular momentum and monotonicity") {
  auto still = reduced_params_from_velocities(kPi / 4, 0.2, 0.0);
  for (double s : {0.0, 1.0, 17.5}) CHECK(phi_of_t(still, s, 1e-12, 0.3) == 0.3);

  const auto p = sample_params();
  double previous = phi_of_t(p, 0.0);
  CHECK(previous == 0.0);
  for (int k = 1; k <= 300; ++k) {
    const double phi = phi_of_t(p, 0.05 * k);
    CHECK(phi > previous);
    previous = phi;
  }
}

TEST_CASE("per-period advance matches the closed-form integral") {
  for (const auto& p : {sample_params(), reduced_params_from_velocities(0.9, -0.3, 0.2),
                        reduced_params_from_velocities(kPi / 4, 0.125, 0.0863587)}) {
    CHECK(std::abs(azimuthal_advance_per_period(p) - closed_form_advance(p)) <= 1e-11);
    const double period = radial_period(p);
    CHECK(std::abs(phi_of_t(p, 2.5 * period) - phi_of_t(p, 0.5 * period) - 2.0 * closed_form_advance(p)) <= 1e-11);
  }
}

TEST_CASE("oracle parameter validation") {
  OracleParams p = sample_params();
  p.E0 = -1.5;
  CHECK_THROWS_AS(p.validate(), parameter_error);
  p = sample_params();
  p.L = 10.0;  // amplitude^2 < 0
  CHECK_THROWS_AS(p.validate(), parameter_error);
  CHECK_THROWS_AS((void)phi_of_t(sample_params(), 1.0, 0.0), parameter_error);
}

TEST_CASE("benchmark initial state") {
  const auto setup = build_benchmark_initial_state(SphereParams{});
  const auto& s = setup.state;
  REQUIRE(s.size() == 3);

  double total_p_phi = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& b = s.bodies[i];
    const auto& next = s.bodies[(i + 1) % 3];
    CHECK(b.theta == next.theta);
    CHECK(b.p_theta == kBenchmarkPTheta);
    CHECK(b.p_phi == kBenchmarkPPhi);
    CHECK(std::remainder(next.phi - b.phi - 2.0 * kPi / 3.0, 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-15));
    total_p_phi += b.p_phi;
  }
  CHECK(total_p_phi == doctest::Approx(3.0 * 0.1727174029854043).epsilon(1e-15));

  // The calibrated normalization: mass k^2 / 2, time scale 2 / k, H = 3 E0.
  const double k = setup.oracle.momentum_scale;
  CHECK(k == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(setup.params.mass == doctest::Approx(0.5 * k * k).epsilon(1e-15));
  const SphereNBodyHamiltonian h(setup.params);
  CHECK(total_energy(s, h) == doctest::Approx(3.0 * setup.oracle.E0).epsilon(1e-12));
  CHECK(s.bodies[0].theta == doctest::Approx(std::acos(psi_center(setup.oracle))).epsilon(1e-15));

  CHECK(std::abs(azimuthal_advance_per_period(setup.oracle) - 2.0 * kPi / 6.0) <= 1e-9);
  CHECK(std::abs(closed_form_advance(setup.oracle) - 2.0 * kPi / 6.0) <= 1e-9);
}

TEST_CASE("benchmark recipe preconditions") {
  SphereParams p;
  p.n_bodies = 4;
  CHECK_THROWS_AS((void)build_benchmark_initial_state(p), config_error);
  p = {};
  p.theta0 = 1.0;
  CHECK_THROWS_AS((void)build_benchmark_initial_state(p), config_error);
}

TEST_CASE("oracle phase states") {
  const auto setup = build_benchmark_initial_state(SphereParams{});
  const SphereNBodyHamiltonian h(setup.params);
  const auto start = oracle_phase_state(setup.oracle, 0.0, 0.0);
  CHECK(state_distance(start, setup.state) <= 1e-15);

  const double e0 = total_energy(start, h);
  const double period = simulation_period(setup.oracle);
  for (int k = 0; k <= 60; ++k) {
    const auto s = oracle_phase_state(setup.oracle, 0.0, 0.1 * period * k);
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK(s.bodies[i].theta == s.bodies[0].theta);
      CHECK(s.bodies[i].p_theta == s.bodies[0].p_theta);
      CHECK(s.bodies[i].p_phi == s.bodies[0].p_phi);
    }
    CHECK(std::abs(total_energy(s, h) - e0) <= 1e-9);
  }
}

TEST_CASE("oracle orbit solves the full equations of motion") {
  // Over a short arc sesi4 with a fine step follows the closed form.
  const auto setup = build_benchmark_initial_state(SphereParams{});
  const SphereNBodyHamiltonian h(setup.params);
  const auto samples = integrate(setup.state, h, Method::sesi4, 0.01, 100, 10);
  for (const auto& z : samples) {
    const auto exact = oracle_phase_state(setup.oracle, 0.0, z.t);
    CHECK(state_distance(z, exact) <= 1e-9);
  }
}
