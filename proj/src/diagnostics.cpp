#include "sesi/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "sesi/errors.hpp"

namespace sesi {

Vec3 angular_momentum(const PhaseState& s, const SphereParams& params) {
  const double m = params.mass;
  const double R = params.radius;
  Vec3 total{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& b = s.bodies[i];
    const double st = std::sin(b.theta);
    if (!(std::abs(st) >= kPoleGuard)) {
      throw singularity_error(i, "angular momentum: body within the pole guard");
    }
    const double ct = std::cos(b.theta);
    const double sp = std::sin(b.phi);
    const double cp = std::cos(b.phi);
    const double theta_dot = b.p_theta / m;
    const double phi_dot = b.p_phi / (m * st * st);

    const Vec3 r{R * st * cp, R * st * sp, R * ct};
    const Vec3 e_theta{ct * cp, ct * sp, -st};
    const Vec3 e_phi{-sp, cp, 0.0};
    Vec3 v{};
    for (int k = 0; k < 3; ++k) v[k] = R * (theta_dot * e_theta[k] + st * phi_dot * e_phi[k]);

    total[0] += m * (r[1] * v[2] - r[2] * v[1]);
    total[1] += m * (r[2] * v[0] - r[0] * v[2]);
    total[2] += m * (r[0] * v[1] - r[1] * v[0]);
  }
  return total;
}

std::vector<PlanePoint> xy_projection(const PhaseState& s, const SphereParams& params) {
  std::vector<PlanePoint> out;
  out.reserve(s.size());
  for (const auto& b : s.bodies) {
    const double rho = params.radius * std::sin(b.theta);
    out.emplace_back(rho * std::cos(b.phi), rho * std::sin(b.phi));
  }
  return out;
}

std::vector<DiagnosticsRow> diagnose_trajectory(std::span<const PhaseState> samples,
                                                const SplitHamiltonian& h,
                                                const SphereParams& params) {
  if (samples.empty()) throw config_error("diagnose_trajectory: no samples");
  std::vector<DiagnosticsRow> rows;
  rows.reserve(samples.size());
  double e0 = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    try {
      DiagnosticsRow row;
      row.t = s.t;
      row.energy = h.value(s);
      if (k == 0) e0 = row.energy;
      row.delta_e = row.energy - e0;
      row.l_vec = angular_momentum(s, params);
      row.bodies_xy = xy_projection(s, params);
      rows.push_back(std::move(row));
    } catch (numerical_error& e) {
      e.set_step(k);
      throw;
    }
  }
  return rows;
}

std::vector<DiagnosticsRow> diagnose_trajectory(std::span<const PhaseState> samples,
                                                const SphereNBodyHamiltonian& h) {
  return diagnose_trajectory(samples, h, h.params());
}

std::size_t steps_to_reach(double t_final, double tau) {
  if (!(tau > 0.0) || !(t_final > 0.0)) throw config_error("steps_to_reach: tau and t_final must be positive");
  const double ratio = t_final / tau;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(n * tau - t_final) > 1e-9 * std::max(1.0, t_final)) {
    std::ostringstream msg;
    msg << "t_final = " << t_final << " is not an integer multiple of tau = " << tau;
    throw config_error(msg.str());
  }
  return static_cast<std::size_t>(n);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw dimension_error("loglog_slope: need two or more pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence_study(const std::function<PhaseState()>& builder,
                                    const SplitHamiltonian& h, Method method,
                                    std::span<const double> taus, double t_final,
                                    const MidpointSolverConfig& midpoint) {
  if (taus.size() < 3) throw config_error("convergence study needs at least three step sizes");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] < taus[i - 1])) throw config_error("convergence step sizes must be strictly decreasing");
  }
  if (method == Method::dopri45) throw config_error("convergence study needs a fixed-step method");

  std::vector<PhaseState> finals;
  finals.reserve(taus.size());
  for (double tau : taus) {
    const std::size_t n = steps_to_reach(t_final, tau);
    const auto samples = integrate(builder(), h, method, tau, n, n, midpoint);
    finals.push_back(samples.back());
  }

  ConvergenceResult result;
  std::vector<double> xs, ys;
  bool all_positive = true;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    const double diff = state_distance(finals[i], finals[i + 1]);
    result.points.push_back({taus[i], diff});
    xs.push_back(taus[i]);
    ys.push_back(diff);
    if (!(diff > 0.0)) all_positive = false;
  }
  if (all_positive) result.slope = loglog_slope(xs, ys);
  return result;
}

}  // namespace sesi
