#include "sesi/integrators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "sesi/errors.hpp"

namespace sesi {

YoshidaCoefficients yoshida_coefficients(double tau) noexcept {
  const double cbrt2 = std::cbrt(2.0);
  const double outer = tau / (2.0 - cbrt2);
  return {outer, -cbrt2 * outer, outer};
}

void MidpointSolverConfig::validate() const {
  if (!(tolerance >= 100.0 * std::numeric_limits<double>::epsilon())) {
    throw config_error("midpoint tolerance must be at least 100 machine epsilons");
  }
  if (max_iterations < 1) throw config_error("midpoint max_iterations must be positive");
}

void DopriConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw config_error("dopri45 tolerances must be positive");
  if (!(initial_step > 0.0) || !(initial_step <= max_step)) {
    throw config_error("dopri45 requires 0 < initial_step <= max_step");
  }
  if (!(safety > 0.0 && safety < 1.0)) throw config_error("dopri45 safety must lie in (0, 1)");
}

PhaseState sesi2_step(const PhaseState& s, const SplitHamiltonian& h, double tau) {
  const std::size_t n = s.size();
  const double half = 0.5 * tau;
  PhaseState z = s;
  std::vector<double> rate(n), dh2_old(n), dh2_new(n), dh3_theta(n), dh3_phi(n);

  h.dh1_dp_theta(z, rate);
  for (std::size_t i = 0; i < n; ++i) z.bodies[i].theta += half * rate[i];

  h.dh2_dp_phi(z, rate);
  for (std::size_t i = 0; i < n; ++i) z.bodies[i].phi += half * rate[i];

  h.dh2_dtheta(z, dh2_old);
  h.dh3(z, dh3_theta, dh3_phi);
  for (std::size_t i = 0; i < n; ++i) z.bodies[i].p_phi -= tau * dh3_phi[i];

  h.dh2_dtheta(z, dh2_new);
  for (std::size_t i = 0; i < n; ++i) {
    z.bodies[i].p_theta -= tau * (dh3_theta[i] + 0.5 * dh2_old[i] + 0.5 * dh2_new[i]);
  }

  // The closing phi drift still sees the half-step theta, so it goes first.
  h.dh2_dp_phi(z, rate);
  for (std::size_t i = 0; i < n; ++i) z.bodies[i].phi += half * rate[i];

  h.dh1_dp_theta(z, rate);
  for (std::size_t i = 0; i < n; ++i) z.bodies[i].theta += half * rate[i];

  z.t = s.t + tau;
  return z;
}

PhaseState sesi4_step(const PhaseState& s, const SplitHamiltonian& h, double tau) {
  const auto c = yoshida_coefficients(tau);
  PhaseState z = sesi2_step(s, h, c.tau1);
  z = sesi2_step(z, h, c.tau2);
  z = sesi2_step(z, h, c.tau3);
  z.t = s.t + tau;
  return z;
}

std::vector<double> vector_field(const PhaseState& s, const SplitHamiltonian& h) {
  const auto p = h.partials(s);
  std::vector<double> f(4 * s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    f[4 * i] = p.dh1_dp_theta[i];
    f[4 * i + 1] = p.dh2_dp_phi[i];
    f[4 * i + 2] = -(p.dh2_dtheta[i] + p.dh3_dtheta[i]);
    f[4 * i + 3] = -p.dh3_dphi[i];
  }
  return f;
}

PhaseState implicit_midpoint_step(const PhaseState& s, const SplitHamiltonian& h, double tau,
                                  const MidpointSolverConfig& cfg, MidpointStats* stats) {
  const double half = 0.5 * tau;
  const std::vector<double> start = to_flat(s);
  std::vector<double> guess = start;
  std::vector<double> next(start.size());
  PhaseState mid = s;

  double residual = std::numeric_limits<double>::infinity();
  int iteration = 0;
  while (iteration < cfg.max_iterations) {
    ++iteration;
    assign_flat(mid, guess);
    const auto f = vector_field(mid, h);
    residual = 0.0;
    for (std::size_t k = 0; k < start.size(); ++k) {
      next[k] = start[k] + half * f[k];
      residual = std::max(residual, std::abs(next[k] - guess[k]));
    }
    guess.swap(next);
    if (!std::isfinite(residual)) break;
    if (residual < cfg.tolerance) break;
  }
  if (stats) *stats = {iteration, residual};
  if (!(residual < cfg.tolerance)) {
    std::ostringstream msg;
    msg << "implicit midpoint did not converge after " << iteration
        << " iterations (residual " << residual << ")";
    throw convergence_error(residual, msg.str());
  }

  assign_flat(mid, guess);
  const auto f = vector_field(mid, h);
  std::vector<double> end(start.size());
  for (std::size_t k = 0; k < start.size(); ++k) end[k] = guess[k] + half * f[k];
  PhaseState out = s;
  assign_flat(out, end);
  out.t = s.t + tau;
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kMinStep = 1e-14;

}  // namespace

std::vector<PhaseState> dopri45_integrate(const PhaseState& s, const SplitHamiltonian& h,
                                          double t_end, const DopriConfig& cfg,
                                          double sample_every, DopriStats* stats) {
  cfg.validate();
  if (!(t_end > s.t)) throw config_error("dopri45: t_end must exceed the initial time");
  if (!(sample_every > 0.0)) throw config_error("dopri45: sample cadence must be positive");

  const std::size_t dim = 4 * s.size();
  PhaseState scratch = s;
  auto rhs = [&](const std::vector<double>& y, double t) {
    assign_flat(scratch, y);
    scratch.t = t;
    return vector_field(scratch, h);
  };

  std::vector<PhaseState> samples{s};
  std::vector<double> y = to_flat(s);
  std::vector<double> tmp(dim), y_new(dim);
  std::array<std::vector<double>, 7> k;

  double t = s.t;
  double step = std::min(cfg.initial_step, cfg.max_step);
  std::size_t next_index = 1;
  DopriStats counts;

  auto target_time = [&](std::size_t index) {
    return std::min(s.t + static_cast<double>(index) * sample_every, t_end);
  };

  try {
    k[0] = rhs(y, t);
    while (t < t_end) {
      const double target = target_time(next_index);
      const bool clipped = step >= target - t;
      const double h_step = clipped ? target - t : step;
      if (h_step < kMinStep && !clipped) {
        std::ostringstream msg;
        msg << "dopri45: step size " << h_step << " underflowed at t = " << t;
        throw stiffness_error(msg.str());
      }

      auto stage = [&](std::initializer_list<std::pair<int, double>> terms) {
        for (std::size_t i = 0; i < dim; ++i) {
          double acc = 0.0;
          for (const auto& [idx, a] : terms) acc += a * k[idx][i];
          tmp[i] = y[i] + h_step * acc;
        }
      };
      stage({{0, a21}});
      k[1] = rhs(tmp, t + c2 * h_step);
      stage({{0, a31}, {1, a32}});
      k[2] = rhs(tmp, t + c3 * h_step);
      stage({{0, a41}, {1, a42}, {2, a43}});
      k[3] = rhs(tmp, t + c4 * h_step);
      stage({{0, a51}, {1, a52}, {2, a53}, {3, a54}});
      k[4] = rhs(tmp, t + c5 * h_step);
      stage({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
      k[5] = rhs(tmp, t + h_step);
      for (std::size_t i = 0; i < dim; ++i) {
        y_new[i] = y[i] + h_step * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                                    b6 * k[5][i]);
      }
      k[6] = rhs(y_new, t + h_step);

      double err = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double e = h_step * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                   e6 * k[5][i] + e7 * k[6][i]);
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (!std::isfinite(err)) throw stiffness_error("dopri45: non-finite error estimate");

      const double factor =
          err == 0.0 ? 5.0 : std::clamp(cfg.safety * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        ++counts.accepted;
        y.swap(y_new);
        k[0] = k[6];
        if (clipped) {
          t = target;
          PhaseState sample = s;
          assign_flat(sample, y);
          sample.t = t;
          samples.push_back(std::move(sample));
          ++next_index;
        } else {
          t += h_step;
        }
        const double proposal = step;
        step = std::min(h_step * factor, cfg.max_step);
        // A step shortened to land on a sample keeps the controller's earlier proposal.
        if (clipped) step = std::max(step, proposal);
      } else {
        ++counts.rejected;
        step = h_step * factor;
        if (step < kMinStep) {
          std::ostringstream msg;
          msg << "dopri45: step size " << step << " underflowed at t = " << t;
          throw stiffness_error(msg.str());
        }
      }
    }
  } catch (numerical_error& e) {
    e.set_step(counts.accepted);
    throw;
  }
  if (stats) *stats = counts;
  return samples;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::sesi2: return "sesi2";
    case Method::sesi4: return "sesi4";
    case Method::midpoint: return "midpoint";
    case Method::dopri45: return "dopri45";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::sesi2, Method::sesi4, Method::midpoint, Method::dopri45}) {
    if (name == to_string(m)) return m;
  }
  throw config_error("unknown method '" + std::string(name) + "'");
}

PhaseState step(Method method, const PhaseState& s, const SplitHamiltonian& h, double tau,
                const MidpointSolverConfig& midpoint) {
  switch (method) {
    case Method::sesi2: return sesi2_step(s, h, tau);
    case Method::sesi4: return sesi4_step(s, h, tau);
    case Method::midpoint: return implicit_midpoint_step(s, h, tau, midpoint);
    case Method::dopri45: break;
  }
  throw config_error("dopri45 is adaptive; use dopri45_integrate");
}

std::vector<PhaseState> integrate(const PhaseState& s, const SplitHamiltonian& h, Method method,
                                  double tau, std::size_t n_steps, std::size_t sample_every,
                                  const MidpointSolverConfig& midpoint) {
  if (n_steps < 1) throw config_error("integrate: n_steps must be at least 1");
  if (sample_every < 1) throw config_error("integrate: sample_every must be at least 1");
  if (method == Method::dopri45) throw config_error("integrate: dopri45 is not a fixed-step method");
  if (method == Method::midpoint) midpoint.validate();

  std::vector<PhaseState> samples;
  samples.reserve(n_steps / sample_every + 2);
  samples.push_back(s);
  PhaseState z = s;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    try {
      z = step(method, z, h, tau, midpoint);
    } catch (numerical_error& e) {
      e.set_step(k);
      throw;
    }
    z.t = s.t + static_cast<double>(k) * tau;
    if (k % sample_every == 0 || k == n_steps) samples.push_back(z);
  }
  return samples;
}

}  // namespace sesi
