#include "sesi/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "sesi/errors.hpp"

namespace sesi::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Output {
 public:
  explicit Output(const std::optional<std::string>& path) {
    if (path) {
      file_ = std::make_unique<std::ofstream>(*path);
      if (!*file_) throw config_error("cannot open output file '" + *path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

template <class Body>
int guarded(Body&& body) {
  try {
    return body();
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const dimension_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const calibration_error& e) {
    std::cerr << "calibration error: " << e.what() << '\n';
    return kCalibrationError;
  } catch (const parameter_error& e) {
    std::cerr << "calibration error: " << e.what() << '\n';
    return kCalibrationError;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error";
    if (e.step()) std::cerr << " at step " << *e.step();
    std::cerr << ": " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

void write_calibration(std::ostream& out, const SphereParams& params, const OracleParams& o) {
  out << "# calibration: mass=" << num(params.mass) << " momentum_scale=" << num(o.momentum_scale)
      << " time_scale=" << num(o.time_scale) << " energy_scale=" << num(o.energy_scale)
      << " E0=" << num(o.E0) << " L=" << num(o.L) << " psi0=" << num(o.psi0)
      << " radial_period=" << num(simulation_period(o)) << '\n';
}

}  // namespace

RunOutput execute_run(const ScenarioConfig& cfg) {
  validate_run_fields(cfg);
  const InitialCondition init = prepare_initial(cfg);
  const SphereNBodyHamiltonian h(init.params);

  RunOutput run;
  run.scenario = cfg;
  run.params = init.params;
  run.calibration = init.oracle;

  const auto start = Clock::now();
  if (cfg.method == Method::dopri45) {
    DopriStats stats;
    const double t_end = init.state.t + static_cast<double>(cfg.n_steps) * cfg.tau;
    run.samples = dopri45_integrate(init.state, h, t_end, cfg.dopri,
                                    cfg.tau * static_cast<double>(cfg.sample_every), &stats);
    run.steps = stats.accepted;
  } else {
    run.samples = integrate(init.state, h, cfg.method, cfg.tau, cfg.n_steps, cfg.sample_every,
                            cfg.midpoint);
    run.steps = cfg.n_steps;
  }
  run.wall_seconds = seconds_since(start);
  run.rows = diagnose_trajectory(run.samples, h);
  return run;
}

void write_run_csv(std::ostream& out, const RunOutput& run, bool timing) {
  const std::size_t n = run.params.n_bodies;
  out << "# scenario: " << run.scenario.source.dump() << '\n';
  out << "# method: " << to_string(run.scenario.method) << '\n';
  out << "# params: n_bodies=" << n << " mass=" << num(run.params.mass)
      << " radius=" << num(run.params.radius) << " theta0=" << num(run.params.theta0) << '\n';
  if (run.calibration) write_calibration(out, run.params, *run.calibration);
  if (timing) {
    out << "# wall_clock_seconds: " << num(run.wall_seconds) << '\n';
    out << "# steps_per_second: " << num(run.steps_per_second()) << '\n';
  }

  out << 't';
  for (std::size_t i = 1; i <= n; ++i) {
    out << ",theta_" << i << ",phi_" << i << ",p_theta_" << i << ",p_phi_" << i;
  }
  out << ",E,dE,Lx,Ly,Lz";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i << ",y_" << i;
  out << '\n';

  for (std::size_t k = 0; k < run.samples.size(); ++k) {
    const auto& s = run.samples[k];
    const auto& row = run.rows[k];
    out << num(s.t);
    for (const auto& b : s.bodies) {
      out << ',' << num(b.theta) << ',' << num(b.phi) << ',' << num(b.p_theta) << ','
          << num(b.p_phi);
    }
    out << ',' << num(row.energy) << ',' << num(row.delta_e) << ',' << num(row.l_vec[0]) << ','
        << num(row.l_vec[1]) << ',' << num(row.l_vec[2]);
    for (const auto& [x, y] : row.bodies_xy) out << ',' << num(x) << ',' << num(y);
    out << '\n';
  }
}

MethodSummary summarize(const RunOutput& run) {
  MethodSummary m;
  m.method = run.scenario.method;
  m.ok = true;
  m.wall_seconds = run.wall_seconds;
  m.steps_per_second = run.steps_per_second();
  if (run.rows.empty()) return m;
  const double t0 = run.rows.front().t;
  const double mid = t0 + 0.5 * (run.rows.back().t - t0);
  const Vec3 l0 = run.rows.front().l_vec;
  for (const auto& row : run.rows) {
    const double de = std::abs(row.delta_e);
    if (row.t <= mid) m.max_de_first_half = std::max(m.max_de_first_half, de);
    if (row.t >= mid) m.max_de_second_half = std::max(m.max_de_second_half, de);
    for (int a = 0; a < 3; ++a) m.l_drift[a] = std::max(m.l_drift[a], std::abs(row.l_vec[a] - l0[a]));
  }
  return m;
}

OracleReport execute_oracle(const ScenarioConfig& cfg) {
  if (!cfg.benchmark_initial) throw config_error("oracle needs the benchmark initial state");
  const auto setup = build_benchmark_initial_state(cfg.params);

  OracleReport r;
  r.oracle = setup.oracle;
  r.params = setup.params;
  r.period = simulation_period(setup.oracle);
  r.advance_per_period = azimuthal_advance_per_period(setup.oracle, cfg.quad_tol);

  const double span = cfg.periods * r.period;
  const std::size_t count = static_cast<std::size_t>(cfg.periods) * cfg.samples_per_period;
  for (std::size_t k = 0; k <= count; ++k) {
    const double t = k == count ? span : span * static_cast<double>(k) / static_cast<double>(count);
    const auto s = oracle_phase_state(setup.oracle, 0.0, t, cfg.quad_tol);
    const auto& b = s.bodies.front();
    r.t.push_back(t);
    r.theta.push_back(b.theta);
    r.phi.push_back(b.phi);
    r.x.push_back(setup.params.radius * std::sin(b.theta) * std::cos(b.phi));
    r.y.push_back(setup.params.radius * std::sin(b.theta) * std::sin(b.phi));
  }

  const SphereNBodyHamiltonian h(setup.params);
  r.closure_steps = static_cast<std::size_t>(std::llround(span / cfg.closure_tau));
  r.closure_tau = span / static_cast<double>(r.closure_steps);
  const auto samples = integrate(setup.state, h, Method::sesi4, r.closure_tau, r.closure_steps,
                                 r.closure_steps);
  PhaseState target = setup.state;
  for (auto& b : target.bodies) b.phi += cfg.periods * r.advance_per_period;
  r.closure_distance = state_distance(samples.back(), target);
  return r;
}

int cmd_run(const std::string& config_path, const CommandOptions& opts) {
  return guarded([&] {
    const auto cfg = load_scenario(config_path);
    const auto run = execute_run(cfg);
    Output out(opts.out);
    write_run_csv(out.stream(), run, opts.timing);
    if (!opts.quiet) {
      std::cerr << to_string(cfg.method) << ": " << run.steps << " steps in "
                << run.wall_seconds << " s, max |dE| "
                << std::max(summarize(run).max_de_first_half, summarize(run).max_de_second_half)
                << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_converge(const std::string& config_path, const CommandOptions& opts) {
  return guarded([&] {
    const auto cfg = load_scenario(config_path);
    if (cfg.method == Method::dopri45) throw config_error("converge needs a fixed-step method");
    const auto init = prepare_initial(cfg);
    const SphereNBodyHamiltonian h(init.params);
    const auto result = convergence_study([&] { return init.state; }, h, cfg.method, cfg.taus,
                                          cfg.t_final, cfg.midpoint);

    Output out(opts.out);
    auto& os = out.stream();
    os << "# scenario: " << cfg.source.dump() << '\n';
    os << "# method: " << to_string(cfg.method) << '\n';
    os << "# t_final: " << num(cfg.t_final) << '\n';
    if (init.oracle) write_calibration(os, init.params, *init.oracle);
    const std::string slope = result.slope ? num(*result.slope) : "nan";
    os << "# slope: " << slope << '\n';
    os << "tau,diff,slope\n";
    for (const auto& p : result.points) os << num(p.tau) << ',' << num(p.diff) << ',' << slope << '\n';
    if (!opts.quiet) std::cerr << to_string(cfg.method) << " fitted slope " << slope << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_compare(const std::string& config_path, const CommandOptions& opts) {
  return guarded([&] {
    const auto cfg = load_scenario(config_path);
    if (cfg.methods.size() < 2) throw config_error("compare needs at least two methods");
    validate_run_fields(cfg);

    std::vector<MethodSummary> summaries;
    bool any_failed = false;
    for (Method method : cfg.methods) {
      ScenarioConfig one = cfg;
      one.method = method;
      MethodSummary summary;
      summary.method = method;
      try {
        const auto run = execute_run(one);
        summary = summarize(run);
        if (opts.out) {
          std::ofstream file(*opts.out + "_" + std::string(to_string(method)) + ".csv");
          if (!file) throw config_error("cannot open per-method output for " + std::string(to_string(method)));
          write_run_csv(file, run, opts.timing);
        }
      } catch (const numerical_error& e) {
        summary.ok = false;
        summary.message = e.what();
        if (e.step()) summary.message += " (step " + std::to_string(*e.step()) + ")";
        any_failed = true;
        std::cerr << to_string(method) << " failed: " << summary.message << '\n';
      }
      summaries.push_back(summary);
    }

    auto write_summary = [&](std::ostream& os) {
      os << "# scenario: " << cfg.source.dump() << '\n';
      const MethodSummary* sesi2 = nullptr;
      const MethodSummary* midpoint = nullptr;
      for (const auto& s : summaries) {
        if (s.ok && s.method == Method::sesi2) sesi2 = &s;
        if (s.ok && s.method == Method::midpoint) midpoint = &s;
      }
      if (opts.timing && sesi2 && midpoint && sesi2->wall_seconds > 0.0) {
        os << "# midpoint_over_sesi2_wall_clock: " << num(midpoint->wall_seconds / sesi2->wall_seconds) << '\n';
      }
      os << "method,status,max_abs_dE_first_half,max_abs_dE_second_half,Lx_drift,Ly_drift,Lz_drift";
      if (opts.timing) os << ",wall_clock_seconds,steps_per_second";
      os << '\n';
      for (const auto& s : summaries) {
        os << to_string(s.method) << ',' << (s.ok ? "ok" : "failed") << ','
           << num(s.max_de_first_half) << ',' << num(s.max_de_second_half) << ','
           << num(s.l_drift[0]) << ',' << num(s.l_drift[1]) << ',' << num(s.l_drift[2]);
        if (opts.timing) os << ',' << num(s.wall_seconds) << ',' << num(s.steps_per_second);
        os << '\n';
      }
    };

    if (opts.out) {
      std::ofstream file(*opts.out + "_summary.csv");
      if (!file) throw config_error("cannot open summary output");
      write_summary(file);
      if (!opts.quiet) write_summary(std::cout);
    } else {
      write_summary(std::cout);
    }
    return static_cast<int>(any_failed ? kPartialFailure : kOk);
  });
}

int cmd_oracle(const std::string& config_path, const CommandOptions& opts) {
  return guarded([&] {
    const auto cfg = load_scenario(config_path);
    const auto report = execute_oracle(cfg);
    Output out(opts.out);
    auto& os = out.stream();
    os << "# scenario: " << cfg.source.dump() << '\n';
    write_calibration(os, report.params, report.oracle);
    os << "# advance_per_period: " << num(report.advance_per_period) << '\n';
    os << "# advance_error: " << num(report.advance_per_period - std::numbers::pi / 3.0) << '\n';
    os << "# closure: method=sesi4 periods=" << cfg.periods << " tau=" << num(report.closure_tau)
       << " steps=" << report.closure_steps << " distance=" << num(report.closure_distance) << '\n';
    os << "t,theta,phi,x,y\n";
    for (std::size_t k = 0; k < report.t.size(); ++k) {
      os << num(report.t[k]) << ',' << num(report.theta[k]) << ',' << num(report.phi[k]) << ','
         << num(report.x[k]) << ',' << num(report.y[k]) << '\n';
    }
    if (!opts.quiet) {
      std::cerr << "per-period advance " << report.advance_per_period << ", closure distance "
                << report.closure_distance << '\n';
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace sesi::cli
