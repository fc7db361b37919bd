#include "sesi/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include "sesi/errors.hpp"
#include "sesi/hamiltonian.hpp"

namespace sesi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTargetAdvance = kTwoPi / 6.0;

double integrate_azimuth(const OracleParams& p, double a, double b, double quad_tol) {
  if (a == b || p.L == 0.0) return 0.0;
  // Integrate over a fixed unit map: Boost's adaptive rule compares scaled
  // estimates against unscaled leaf errors, which misbehaves on short spans.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto integrand = [&](double u) {
    const double psi = psi_of_t(p, mid + half * u);
    return p.L / (1.0 - psi * psi);
  };
  double error = 0.0;
  const double value = half * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                                  integrand, -1.0, 1.0, 12, std::max(1e-2 * quad_tol, 1e-13), &error);
  error *= std::abs(half);
  if (!(error <= quad_tol) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "azimuth quadrature on [" << a << ", " << b << "] reached error " << error
        << ", requested " << quad_tol;
    throw accuracy_error(msg.str());
  }
  return value;
}

}  // namespace

void OracleParams::validate() const {
  if (!(1.0 + E0 > 0.0)) throw parameter_error("oracle requires 1 + E0 > 0");
  const double amp2 = (E0 - L * L - E0 * psi0 * psi0 / (1.0 + E0)) / (1.0 + E0);
  // Round-off at a turning point can leave amp2 a few ulps below zero.
  if (amp2 < -1e-14) throw parameter_error("oracle amplitude squared is negative");
  const double centre = psi0 / (1.0 + E0);
  if (!(std::abs(centre) + std::sqrt(std::max(amp2, 0.0)) < 1.0)) {
    throw parameter_error("oracle orbit reaches a pole");
  }
  if (!(momentum_scale > 0.0 && time_scale > 0.0 && energy_scale > 0.0)) {
    throw parameter_error("oracle scale factors must be positive");
  }
}

double reduced_potential(double theta, double theta0) {
  const double d = std::cos(theta) - std::cos(theta0);
  const double st = std::sin(theta);
  return d * d / (st * st);
}

double reduced_potential_psi(double psi, double psi0) { return (psi - psi0) * (psi - psi0); }

double reduced_energy(double theta, double theta_dot, double L, double theta0) {
  const double st = std::sin(theta);
  return reduced_potential(theta, theta0) + L * L / (st * st) + theta_dot * theta_dot;
}

double psi_center(const OracleParams& p) { return p.psi0 / (1.0 + p.E0); }

double psi_amplitude(const OracleParams& p) {
  const double amp2 = (p.E0 - p.L * p.L - p.E0 * p.psi0 * p.psi0 / (1.0 + p.E0)) / (1.0 + p.E0);
  return p.direction * std::sqrt(std::max(amp2, 0.0));
}

double radial_frequency(const OracleParams& p) { return std::sqrt(1.0 + p.E0); }

double radial_period(const OracleParams& p) { return kTwoPi / radial_frequency(p); }

double simulation_period(const OracleParams& p) { return radial_period(p) / p.time_scale; }

double psi_of_t(const OracleParams& p, double s) {
  p.validate();
  return psi_center(p) + psi_amplitude(p) * std::sin(radial_frequency(p) * s);
}

double psi_dot_of_t(const OracleParams& p, double s) {
  const double w = radial_frequency(p);
  return psi_amplitude(p) * w * std::cos(w * s);
}

double theta_of_t(const OracleParams& p, double s) { return std::acos(psi_of_t(p, s)); }

double azimuthal_advance_per_period(const OracleParams& p, double quad_tol) {
  p.validate();
  return integrate_azimuth(p, 0.0, radial_period(p), quad_tol);
}

double phi_of_t(const OracleParams& p, double s, double quad_tol, double phi_at_0) {
  p.validate();
  if (!(quad_tol > 0.0)) throw parameter_error("quadrature tolerance must be positive");
  const double period = radial_period(p);
  const double whole = std::floor(s / period);
  const double rest = s - whole * period;
  double phi = phi_at_0 + integrate_azimuth(p, 0.0, rest, quad_tol);
  if (whole != 0.0) phi += whole * azimuthal_advance_per_period(p, quad_tol);
  return phi;
}

ReducedState reduced_state(const OracleParams& p, double s, double quad_tol, double phi_at_0) {
  const double psi = psi_of_t(p, s);
  const double st = std::sqrt(1.0 - psi * psi);
  ReducedState r;
  r.theta = std::acos(psi);
  r.phi = phi_of_t(p, s, quad_tol, phi_at_0);
  r.theta_dot = -psi_dot_of_t(p, s) / st;
  r.phi_dot = p.L / (st * st);
  return r;
}

OracleParams reduced_params_from_velocities(double theta0, double theta_dot, double L) {
  OracleParams p;
  p.theta0 = theta0;
  p.psi0 = std::cos(theta0);
  p.L = L;
  p.direction = theta_dot > 0.0 ? -1.0 : 1.0;

  // E0 = theta'^2 + L^2 / (1 - c^2) + U(c) / (1 - c^2) with c = psi0 / (1 + E0);
  // the right side depends on E0 only weakly, so plain iteration contracts.
  auto rhs = [&](double energy) {
    const double c = p.psi0 / (1.0 + energy);
    return theta_dot * theta_dot + (L * L + reduced_potential_psi(c, p.psi0)) / (1.0 - c * c);
  };
  double energy = rhs(0.0);
  bool settled = false;
  for (int it = 0; it < 200; ++it) {
    const double next = rhs(energy);
    const bool done = std::abs(next - energy) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                     std::abs(next);
    energy = next;
    if (done) {
      settled = true;
      break;
    }
  }
  if (!settled) throw calibration_error("reduced energy iteration did not settle");
  p.E0 = energy;
  p.validate();
  return p;
}

double calibrate_momentum_scale(double theta0, double p_theta, double p_phi, double quad_tol) {
  auto mismatch = [&](double k) {
    const auto p = reduced_params_from_velocities(theta0, p_theta / k, p_phi / k);
    return azimuthal_advance_per_period(p, quad_tol) - kTargetAdvance;
  };
  double lo = 0.5;
  double hi = 8.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  try {
    f_lo = mismatch(lo);
    f_hi = mismatch(hi);
  } catch (const error& e) {
    throw calibration_error(std::string("momentum scale bracket: ") + e.what());
  }
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw calibration_error("momentum scale bracket does not straddle the 2 pi / 6 advance");
  }
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      mismatch, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  if (max_iter >= 200) throw calibration_error("momentum scale root search did not converge");
  return 0.5 * (a + b);
}

BenchmarkSetup build_benchmark_initial_state(const SphereParams& params) {
  params.validate();
  if (params.n_bodies != 3) throw config_error("benchmark initial state needs n_bodies = 3");
  if (std::abs(params.theta0 - std::numbers::pi / 4.0) > 1e-15) {
    throw config_error("benchmark initial state needs theta0 = pi / 4");
  }

  const double k = calibrate_momentum_scale(params.theta0, kBenchmarkPTheta, kBenchmarkPPhi);
  OracleParams oracle =
      reduced_params_from_velocities(params.theta0, kBenchmarkPTheta / k, kBenchmarkPPhi / k);
  oracle.momentum_scale = k;
  oracle.time_scale = 2.0 / k;
  oracle.energy_scale = 3.0;

  BenchmarkSetup setup;
  setup.params = params;
  setup.params.mass = 0.5 * k * k;
  setup.oracle = oracle;

  const double theta = std::acos(psi_center(oracle));
  setup.state.t = 0.0;
  for (int i = 0; i < 3; ++i) {
    setup.state.bodies.push_back({theta, kTwoPi * i / 3.0, kBenchmarkPTheta, kBenchmarkPPhi});
  }

  const SphereNBodyHamiltonian h(setup.params);
  const double energy = total_energy(setup.state, h);
  const double expected = oracle.energy_scale * oracle.E0;
  const double velocity_mismatch =
      std::abs(std::abs(psi_dot_of_t(oracle, 0.0)) -
               std::sin(theta) * std::abs(kBenchmarkPTheta / k));
  if (std::abs(energy - expected) > 1e-12 * std::abs(expected) || velocity_mismatch > 1e-12) {
    std::ostringstream msg;
    msg << "calibrated normalization inconsistent: H = " << energy << ", 3 E0 = " << expected
        << ", |psi'| mismatch " << velocity_mismatch;
    throw calibration_error(msg.str());
  }
  return setup;
}

PhaseState oracle_phase_state(const OracleParams& p, double phi_at_0, double t, double quad_tol) {
  const double s = p.time_scale * t;
  const ReducedState r = reduced_state(p, s, quad_tol, phi_at_0);
  PhaseState out;
  out.t = t;
  const double p_theta = p.momentum_scale * r.theta_dot;
  const double p_phi = p.momentum_scale * p.L;
  for (int i = 0; i < 3; ++i) {
    out.bodies.push_back({r.theta, r.phi + kTwoPi * i / 3.0, p_theta, p_phi});
  }
  return out;
}

}  // namespace sesi
