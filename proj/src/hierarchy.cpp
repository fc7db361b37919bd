#include "sesi/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "sesi/errors.hpp"
#include "sesi/hamiltonian.hpp"
#include "sesi/integrators.hpp"

namespace sesi {

double HierarchicalHamiltonian::value(const FlatState& s) const {
  double sum = potential.value(s.q);
  for (const auto& k : kinetic) sum += k.value(s.q, s.p);
  return sum;
}

std::string HierarchyViolation::describe() const {
  std::ostringstream out;
  out << "K_" << term + 1 << " depends on " << (momentum ? "p_" : "q_") << variable + 1;
  return out.str();
}

namespace {

void check_structure(const FlatState& s, const HierarchicalHamiltonian& h) {
  const std::size_t d = h.dimension;
  if (h.kinetic.size() != d) throw structure_error("number of kinetic terms differs from dimension");
  if (s.q.size() != d || s.p.size() != d) throw structure_error("state size differs from dimension");
  for (const auto& k : h.kinetic) {
    if (!k.value || !k.d_dp || !k.d_dq) throw structure_error("kinetic term is missing an evaluator");
  }
  if (!h.potential.value || !h.potential.gradient) throw structure_error("potential is missing an evaluator");
}

}  // namespace

std::optional<HierarchyViolation> validate_hierarchy(const HierarchicalHamiltonian& h, int probes,
                                                     std::uint64_t seed) {
  if (probes < 1) throw config_error("validate_hierarchy needs at least one probe");
  const std::size_t d = h.dimension;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> kick(0.05, 0.5);

  for (int probe = 0; probe < probes; ++probe) {
    FlatState s;
    if (h.sampler) {
      s = h.sampler(rng);
    } else {
      s.q.resize(d);
      s.p.resize(d);
      for (auto& x : s.q) x = unit(rng);
      for (auto& x : s.p) x = unit(rng);
    }
    check_structure(s, h);

    for (std::size_t i = 0; i < d; ++i) {
      const double base = h.kinetic[i].value(s.q, s.p);
      for (std::size_t j = i; j < d; ++j) {
        FlatState t = s;
        t.q[j] += kick(rng) * (1.0 + std::abs(t.q[j]));
        if (h.kinetic[i].value(t.q, t.p) != base) return HierarchyViolation{i, false, j};
      }
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        FlatState t = s;
        t.p[j] += kick(rng) * (1.0 + std::abs(t.p[j]));
        if (h.kinetic[i].value(t.q, t.p) != base) return HierarchyViolation{i, true, j};
      }
    }
  }
  return std::nullopt;
}

FlatState hierarchical_step2(const FlatState& s, const HierarchicalHamiltonian& h, double tau) {
  check_structure(s, h);
  const std::size_t d = h.dimension;
  const double half = 0.5 * tau;
  FlatState z = s;
  std::vector<double> force(d), grad(d);

  // Coordinates to t + tau/2, ascending: K_i sees the already advanced q_{<i}.
  for (std::size_t i = 0; i < d; ++i) z.q[i] += half * h.kinetic[i].d_dp(z.q, z.p);

  // Momenta to t + tau/2 with the old momenta throughout.
  h.potential.gradient(z.q, force);
  for (std::size_t j = 1; j < d; ++j) {
    std::span<double> g(grad.data(), j);
    h.kinetic[j].d_dq(z.q, z.p, g);
    for (std::size_t i = 0; i < j; ++i) force[i] += g[i];
  }
  for (std::size_t i = 0; i < d; ++i) z.p[i] -= half * force[i];

  // Momenta to t + tau, descending: dH/dq_i needs p_j for j > i at t + tau.
  h.potential.gradient(z.q, force);
  for (std::size_t i = d; i-- > 0;) {
    z.p[i] -= half * force[i];
    if (i == 0) break;
    std::span<double> g(grad.data(), i);
    h.kinetic[i].d_dq(z.q, z.p, g);
    for (std::size_t j = 0; j < i; ++j) force[j] += g[j];
  }

  // Coordinates to t + tau from the half-step coordinates and the new momenta.
  std::vector<double> rate(d);
  for (std::size_t i = 0; i < d; ++i) rate[i] = h.kinetic[i].d_dp(z.q, z.p);
  for (std::size_t i = 0; i < d; ++i) z.q[i] += half * rate[i];

  z.t = s.t + tau;
  return z;
}

FlatState hierarchical_step4(const FlatState& s, const HierarchicalHamiltonian& h, double tau) {
  const auto c = yoshida_coefficients(tau);
  FlatState z = hierarchical_step2(s, h, c.tau1);
  z = hierarchical_step2(z, h, c.tau2);
  z = hierarchical_step2(z, h, c.tau3);
  z.t = s.t + tau;
  return z;
}

HierarchicalStepper::HierarchicalStepper(HierarchicalHamiltonian h, int probes) : h_(std::move(h)) {
  if (const auto violation = validate_hierarchy(h_, probes)) {
    throw structure_error("hierarchy violation: " + violation->describe());
  }
}

FlatState HierarchicalStepper::step2(const FlatState& s, double tau) const {
  return hierarchical_step2(s, h_, tau);
}

FlatState HierarchicalStepper::step4(const FlatState& s, double tau) const {
  return hierarchical_step4(s, h_, tau);
}

FlatState to_hierarchical(const PhaseState& s) {
  FlatState f;
  f.t = s.t;
  for (const auto& b : s.bodies) {
    f.q.insert(f.q.end(), {b.theta, b.phi});
    f.p.insert(f.p.end(), {b.p_theta, b.p_phi});
  }
  return f;
}

PhaseState from_hierarchical(const FlatState& s) {
  if (s.q.size() != s.p.size() || s.q.size() % 2 != 0) {
    throw dimension_error("from_hierarchical: expected (theta, phi) pairs");
  }
  PhaseState out;
  out.t = s.t;
  for (std::size_t i = 0; i < s.q.size(); i += 2) {
    out.bodies.push_back({s.q[i], s.q[i + 1], s.p[i], s.p[i + 1]});
  }
  return out;
}

namespace {

double guarded_sin(double theta, std::size_t body) {
  const double st = std::sin(theta);
  if (!(std::abs(st) >= kPoleGuard)) throw singularity_error(body, "kinetic term evaluated at a pole");
  return st;
}

}  // namespace

HierarchicalHamiltonian sphere_hierarchy(const SphereParams& params) {
  params.validate();
  const std::size_t n = params.n_bodies;
  const double m = params.mass;
  HierarchicalHamiltonian h;
  h.dimension = 2 * n;

  for (std::size_t body = 0; body < n; ++body) {
    const std::size_t it = 2 * body;
    const std::size_t ip = it + 1;

    KineticTerm polar;
    polar.value = [=](std::span<const double>, std::span<const double> p) {
      return p[it] * p[it] / (2.0 * m);
    };
    polar.d_dp = [=](std::span<const double>, std::span<const double> p) { return p[it] / m; };
    polar.d_dq = [](std::span<const double>, std::span<const double>, std::span<double> g) {
      std::fill(g.begin(), g.end(), 0.0);
    };

    KineticTerm azimuthal;
    azimuthal.value = [=](std::span<const double> q, std::span<const double> p) {
      const double r = p[ip] / guarded_sin(q[it], body);
      return r * r / (2.0 * m);
    };
    azimuthal.d_dp = [=](std::span<const double> q, std::span<const double> p) {
      const double st = guarded_sin(q[it], body);
      return p[ip] / (m * st * st);
    };
    azimuthal.d_dq = [=](std::span<const double> q, std::span<const double> p, std::span<double> g) {
      std::fill(g.begin(), g.end(), 0.0);
      const double st = guarded_sin(q[it], body);
      g[it] = -p[ip] * p[ip] * std::cos(q[it]) / (m * st * st * st);
    };

    h.kinetic.push_back(std::move(polar));
    h.kinetic.push_back(std::move(azimuthal));
  }

  auto sphere = std::make_shared<SphereNBodyHamiltonian>(params);
  auto as_state = [n](std::span<const double> q) {
    PhaseState s;
    s.bodies.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
      s.bodies[b].theta = q[2 * b];
      s.bodies[b].phi = q[2 * b + 1];
    }
    return s;
  };
  h.potential.value = [=](std::span<const double> q) { return sphere->h3(as_state(q)); };
  h.potential.gradient = [=](std::span<const double> q, std::span<double> grad) {
    std::vector<double> dtheta(n), dphi(n);
    sphere->dh3(as_state(q), dtheta, dphi);
    for (std::size_t b = 0; b < n; ++b) {
      grad[2 * b] = dtheta[b];
      grad[2 * b + 1] = dphi[b];
    }
  };

  h.sampler = [n](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> theta(0.3, 2.8), angle(-3.0, 3.0), mom(-1.0, 1.0);
    FlatState s;
    for (std::size_t b = 0; b < n; ++b) {
      s.q.insert(s.q.end(), {theta(rng), angle(rng)});
      s.p.insert(s.p.end(), {mom(rng), mom(rng)});
    }
    return s;
  };
  return h;
}

}  // namespace sesi
