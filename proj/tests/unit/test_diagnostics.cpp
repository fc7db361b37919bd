#include <cmath>
#include <random>

#include "doctest.h"
#include "sesi/diagnostics.hpp"
#include "sesi/errors.hpp"
#include "support.hpp"

using namespace sesi;
using test::kPi;

namespace {

// m r x v by explicit vector algebra, v from the time derivative of r.
Vec3 cross_product_oracle(const PhaseState& s, const SphereParams& params) {
  Vec3 total{};
  for (const auto& b : s.bodies) {
    const double st = std::sin(b.theta), ct = std::cos(b.theta);
    const double sp = std::sin(b.phi), cp = std::cos(b.phi);
    const double theta_dot = b.p_theta / params.mass;
    const double phi_dot = b.p_phi / (params.mass * st * st);
    const double R = params.radius;
    const Vec3 r{R * st * cp, R * st * sp, R * ct};
    const Vec3 v{R * (ct * cp * theta_dot - st * sp * phi_dot), R * (ct * sp * theta_dot + st * cp * phi_dot),
                 -R * st * theta_dot};
    total[0] += params.mass * (r[1] * v[2] - r[2] * v[1]);
    total[1] += params.mass * (r[2] * v[0] - r[0] * v[2]);
    total[2] += params.mass * (r[0] * v[1] - r[1] * v[0]);
  }
  return total;
}

}  // namespace

TEST_CASE("angular momentum examples") {
  SphereParams one{1, 1.0, 1.0, kPi / 4};
  PhaseState s;
  s.bodies = {{kPi / 2, 0.0, 0.0, 0.0}};
  auto l = angular_momentum(s, one);
  CHECK(l[0] == 0.0);
  CHECK(l[1] == 0.0);
  CHECK(l[2] == 0.0);

  s.bodies[0].p_theta = 1.0;
  l = angular_momentum(s, one);
  CHECK(std::abs(l[0]) < 1e-16);
  CHECK(l[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(l[2]) < 1e-16);
}

TEST_CASE("angular momentum matches the explicit cross product") {
  std::mt19937_64 rng(73);
  for (double radius : {1.0, 0.7}) {
    SphereParams params{3, 1.6, radius, kPi / 4};
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = test::random_state(rng, 3, radius, 1.0);
      const auto l = angular_momentum(s, params);
      const auto oracle = cross_product_oracle(s, params);
      for (int a = 0; a < 3; ++a) CHECK(std::abs(l[a] - oracle[a]) <= 1e-13);
    }
  }
}

TEST_CASE("Lz equals the total azimuthal momentum") {
  std::mt19937_64 rng(79);
  SphereParams params{4, 2.0, 1.0, kPi / 4};
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = test::random_state(rng, 4, 1.0, 1.0);
    double sum = 0.0;
    for (const auto& b : s.bodies) sum += b.p_phi;
    CHECK(std::abs(angular_momentum(s, params)[2] - sum) <= 1e-12);
  }
}

TEST_CASE("angular momentum rotates with a global azimuth shift") {
  std::mt19937_64 rng(83);
  SphereParams params{3, 1.0, 1.0, kPi / 4};
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = test::random_state(rng, 3, 1.0, 1.0);
    const double c = 0.1 * trial - 3.0;
    auto t = s;
    for (auto& b : t.bodies) b.phi += c;
    const auto l = angular_momentum(s, params);
    const auto r = angular_momentum(t, params);
    CHECK(std::abs(r[0] - (std::cos(c) * l[0] - std::sin(c) * l[1])) <= 1e-12);
    CHECK(std::abs(r[1] - (std::sin(c) * l[0] + std::cos(c) * l[1])) <= 1e-12);
    CHECK(std::abs(r[2] - l[2]) <= 1e-12);
  }
}

TEST_CASE("xy projection examples") {
  SphereParams params{3, 1.0, 1.0, kPi / 4};
  PhaseState s;
  s.bodies = {{0.0, 1.3, 0.0, 0.0}, {kPi / 2, 0.0, 0.0, 0.0}, {kPi / 4, kPi / 2, 0.0, 0.0}};
  const auto xy = xy_projection(s, params);
  CHECK(xy[0].first == 0.0);
  CHECK(xy[0].second == 0.0);
  CHECK(xy[1].first == doctest::Approx(1.0));
  CHECK(std::abs(xy[1].second) < 1e-16);
  CHECK(std::abs(xy[2].first) < 1e-16);
  CHECK(xy[2].second == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("diagnose_trajectory trivial cases") {
  const SphereNBodyHamiltonian h(SphereParams{});
  const auto eq = test::symmetric_state(kPi / 4);
  const auto samples = integrate(eq, h, Method::sesi2, 0.1, 100, 10);
  const auto rows = diagnose_trajectory(samples, h);
  REQUIRE(rows.size() == samples.size());
  // The symmetric rest state balances only to round-off.
  for (const auto& row : rows) {
    CHECK(std::abs(row.delta_e) <= 1e-25);
    for (double v : row.l_vec) CHECK(std::abs(v) <= 1e-25);
    CHECK(row.bodies_xy.size() == 3);
  }

  std::vector<PhaseState> single{test::symmetric_state(1.0, 0.2, 0.1)};
  const auto one = diagnose_trajectory(single, h);
  REQUIRE(one.size() == 1);
  CHECK(one[0].delta_e == 0.0);

  CHECK_THROWS_AS((void)diagnose_trajectory(std::vector<PhaseState>{}, h), config_error);
}

TEST_CASE("energy deviation ignores a constant potential shift") {
  std::mt19937_64 rng(89);
  const SphereParams params;
  const SphereNBodyHamiltonian plain(params);
  const test::ShiftedSphere shifted(params, 12.5);
  const auto s = test::random_state(rng, 3, 1.0, 0.3);
  const auto a = integrate(s, plain, Method::sesi2, 0.05, 200, 20);
  const auto b = integrate(s, shifted, Method::sesi2, 0.05, 200, 20);
  const auto ra = diagnose_trajectory(a, plain, params);
  const auto rb = diagnose_trajectory(b, shifted, params);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t k = 0; k < ra.size(); ++k) {
    CHECK(rb[k].energy == doctest::Approx(ra[k].energy + 12.5).epsilon(1e-14));
    CHECK(std::abs(rb[k].delta_e - ra[k].delta_e) <= 1e-13);
  }
}

TEST_CASE("diagnostics propagate evaluation errors with the sample index") {
  const SphereNBodyHamiltonian h(SphereParams{});
  std::vector<PhaseState> samples{test::symmetric_state(1.0), test::symmetric_state(1.0)};
  samples[1].bodies[2].theta = 0.0;
  try {
    (void)diagnose_trajectory(samples, h);
    FAIL("expected singularity_error");
  } catch (const singularity_error& e) {
    REQUIRE(e.step().has_value());
    CHECK(*e.step() == 1);
  }
}

TEST_CASE("loglog slope and step counts") {
  std::vector<double> x{0.1, 0.05, 0.025}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
  CHECK(loglog_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));

  CHECK(steps_to_reach(10.0, 0.1) == 100);
  CHECK(steps_to_reach(10.0, 0.00625) == 1600);
  CHECK_THROWS_AS((void)steps_to_reach(10.0, 0.3), config_error);
}

TEST_CASE("convergence study on an equilibrium has no slope") {
  const SphereNBodyHamiltonian h(SphereParams{});
  std::vector<double> taus{0.1, 0.05, 0.025};
  // A lone body at rest is an exact fixed point, so every difference is exactly zero.
  const SphereNBodyHamiltonian h1(SphereParams{1, 1.0, 1.0, kPi / 4});
  PhaseState rest;
  rest.bodies = {{1.0, 0.5, 0.0, 0.0}};
  const auto result = convergence_study([&] { return rest; }, h1, Method::sesi2, taus, 1.0);
  REQUIRE(result.points.size() == 2);
  for (const auto& p : result.points) CHECK(p.diff == 0.0);
  CHECK_FALSE(result.slope.has_value());
}

TEST_CASE("convergence study input checks") {
  const SphereNBodyHamiltonian h(SphereParams{});
  auto build = [] { return test::symmetric_state(kPi / 4); };
  std::vector<double> two{0.1, 0.05};
  CHECK_THROWS_AS((void)convergence_study(build, h, Method::sesi2, two, 1.0), config_error);
  std::vector<double> rising{0.025, 0.05, 0.1};
  CHECK_THROWS_AS((void)convergence_study(build, h, Method::sesi2, rising, 1.0), config_error);
  std::vector<double> uneven{0.3, 0.2, 0.1};
  CHECK_THROWS_AS((void)convergence_study(build, h, Method::sesi2, uneven, 1.0), config_error);
}

TEST_CASE("convergence study recovers second order on a random orbit") {
  std::mt19937_64 rng(97);
  const SphereNBodyHamiltonian h(SphereParams{});
  const auto s = test::random_state(rng, 3, 1.0, 0.2);
  // This orbit has a close pass; tau = 0.1 is still outside the asymptotic range there.
  std::vector<double> taus{0.05, 0.025, 0.0125, 0.00625};
  const auto result = convergence_study([&] { return s; }, h, Method::sesi2, taus, 2.0);
  REQUIRE(result.slope.has_value());
  CHECK(*result.slope == doctest::Approx(2.0).epsilon(0.05));
}
