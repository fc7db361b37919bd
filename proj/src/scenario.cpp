#include "sesi/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sesi/errors.hpp"

namespace sesi {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "n_bodies",        "mass",           "radius",
      "theta0",          "initial",        "method",
      "tau",             "n_steps",        "sample_every",
      "midpoint_tolerance", "midpoint_max_iterations", "dopri_rel_tol",
      "dopri_abs_tol",   "dopri_initial_step", "dopri_max_step",
      "dopri_safety",    "taus",           "t_final",
      "methods",         "periods",        "samples_per_period",
      "closure_tau",     "quad_tol"};
  return keys;
}

double get_number(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw config_error(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw config_error(std::string("'") + key + "' must be finite");
  return x;
}

std::size_t get_count(const json& doc, const char* key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw config_error(std::string("'") + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

BodyState parse_body(const json& b, std::size_t index) {
  if (!b.is_object()) throw config_error("initial body " + std::to_string(index) + " must be an object");
  for (const auto& [key, _] : b.items()) {
    if (key != "theta" && key != "phi" && key != "p_theta" && key != "p_phi") {
      throw config_error("initial body " + std::to_string(index) + ": unknown key '" + key + "'");
    }
  }
  for (const char* key : {"theta", "phi", "p_theta", "p_phi"}) {
    if (!b.contains(key)) {
      throw config_error("initial body " + std::to_string(index) + " lacks '" + key + "'");
    }
  }
  return {get_number(b, "theta", 0.0), get_number(b, "phi", 0.0), get_number(b, "p_theta", 0.0),
          get_number(b, "p_phi", 0.0)};
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  if (!doc.is_object()) throw config_error("scenario must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().contains(key)) throw config_error("unknown scenario key '" + key + "'");
  }

  ScenarioConfig cfg;
  cfg.source = doc;
  cfg.params.n_bodies = get_count(doc, "n_bodies", cfg.params.n_bodies);
  cfg.mass_given = doc.contains("mass");
  cfg.params.mass = get_number(doc, "mass", cfg.params.mass);
  cfg.params.radius = get_number(doc, "radius", cfg.params.radius);
  cfg.params.theta0 = get_number(doc, "theta0", cfg.params.theta0);
  cfg.params.validate();

  if (doc.contains("initial")) {
    const auto& init = doc.at("initial");
    if (init.is_string()) {
      if (init.get<std::string>() != "benchmark") {
        throw config_error("'initial' must be \"benchmark\" or a list of bodies");
      }
      cfg.benchmark_initial = true;
    } else if (init.is_array()) {
      cfg.benchmark_initial = false;
      for (std::size_t i = 0; i < init.size(); ++i) cfg.initial_bodies.push_back(parse_body(init[i], i));
      if (cfg.initial_bodies.size() != cfg.params.n_bodies) {
        throw config_error("'initial' lists " + std::to_string(cfg.initial_bodies.size()) +
                           " bodies but n_bodies is " + std::to_string(cfg.params.n_bodies));
      }
    } else {
      throw config_error("'initial' must be \"benchmark\" or a list of bodies");
    }
  }
  if (cfg.benchmark_initial) {
    if (cfg.params.n_bodies != 3) throw config_error("benchmark initial state requires n_bodies = 3");
    if (std::abs(cfg.params.theta0 - std::numbers::pi / 4.0) > 1e-15) {
      throw config_error("benchmark initial state requires theta0 = pi/4");
    }
    if (cfg.mass_given) throw config_error("benchmark initial state calibrates the mass; omit 'mass'");
  }

  if (doc.contains("method")) {
    if (!doc.at("method").is_string()) throw config_error("'method' must be a string");
    cfg.method = parse_method(doc.at("method").get<std::string>());
  }
  cfg.tau = get_number(doc, "tau", cfg.tau);
  cfg.n_steps = get_count(doc, "n_steps", cfg.n_steps);
  cfg.sample_every = get_count(doc, "sample_every", cfg.sample_every);

  cfg.midpoint.tolerance = get_number(doc, "midpoint_tolerance", cfg.midpoint.tolerance);
  if (doc.contains("midpoint_max_iterations")) {
    cfg.midpoint.max_iterations = static_cast<int>(get_count(doc, "midpoint_max_iterations", 1));
  }
  cfg.midpoint.validate();

  cfg.dopri.rel_tol = get_number(doc, "dopri_rel_tol", cfg.dopri.rel_tol);
  cfg.dopri.abs_tol = get_number(doc, "dopri_abs_tol", cfg.dopri.abs_tol);
  cfg.dopri.initial_step = get_number(doc, "dopri_initial_step", cfg.dopri.initial_step);
  cfg.dopri.max_step = get_number(doc, "dopri_max_step", cfg.dopri.max_step);
  cfg.dopri.safety = get_number(doc, "dopri_safety", cfg.dopri.safety);
  cfg.dopri.validate();

  if (doc.contains("taus")) {
    const auto& taus = doc.at("taus");
    if (!taus.is_array()) throw config_error("'taus' must be an array of numbers");
    for (const auto& t : taus) {
      if (!t.is_number() || !(t.get<double>() > 0.0)) throw config_error("'taus' entries must be positive numbers");
      cfg.taus.push_back(t.get<double>());
    }
  }
  cfg.t_final = get_number(doc, "t_final", cfg.t_final);

  if (doc.contains("methods")) {
    const auto& methods = doc.at("methods");
    if (!methods.is_array()) throw config_error("'methods' must be an array of names");
    for (const auto& m : methods) {
      if (!m.is_string()) throw config_error("'methods' entries must be strings");
      cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
  }

  cfg.periods = static_cast<int>(get_count(doc, "periods", static_cast<std::size_t>(cfg.periods)));
  cfg.samples_per_period = static_cast<int>(
      get_count(doc, "samples_per_period", static_cast<std::size_t>(cfg.samples_per_period)));
  cfg.closure_tau = get_number(doc, "closure_tau", cfg.closure_tau);
  cfg.quad_tol = get_number(doc, "quad_tol", cfg.quad_tol);
  if (!(cfg.closure_tau > 0.0)) throw config_error("'closure_tau' must be positive");
  if (!(cfg.quad_tol > 0.0)) throw config_error("'quad_tol' must be positive");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw config_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

void validate_run_fields(const ScenarioConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw config_error("'tau' must be positive");
  if (cfg.n_steps % cfg.sample_every != 0) {
    throw config_error("'n_steps' must be a multiple of 'sample_every'");
  }
}

InitialCondition prepare_initial(const ScenarioConfig& cfg) {
  InitialCondition init;
  if (cfg.benchmark_initial) {
    auto setup = build_benchmark_initial_state(cfg.params);
    init.params = setup.params;
    init.state = std::move(setup.state);
    init.oracle = setup.oracle;
    return init;
  }
  init.params = cfg.params;
  init.state.t = 0.0;
  init.state.bodies = cfg.initial_bodies;
  if (const auto bad = validate_state(init.state, init.params)) {
    throw config_error("initial body " + std::to_string(bad->body) + " field " +
                       to_string(bad->field) + ": " + bad->reason);
  }
  return init;
}

}  // namespace sesi
