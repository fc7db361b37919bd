#include "sesi/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sesi/errors.hpp"

namespace sesi {

namespace {

constexpr double kClampTolerance = 1e-12;

double sin_checked(const BodyState& b, std::size_t index) {
  const double s = std::sin(b.theta);
  if (!(std::abs(s) >= kPoleGuard)) {
    std::ostringstream msg;
    msg << "body " << index << " is within the pole guard (theta = " << b.theta << ")";
    throw singularity_error(index, msg.str());
  }
  return s;
}

struct Embedded {
  double x, y, z;
};

Embedded unit_vector(const BodyState& b) {
  const double st = std::sin(b.theta);
  return {st * std::cos(b.phi), st * std::sin(b.phi), std::cos(b.theta)};
}

// Chord factor x = |n_i - n_j| / sqrt(3) of two unit vectors.
double chord_factor(const Embedded& a, const Embedded& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt((dx * dx + dy * dy + dz * dz) / 3.0);
}

double clamp_chord_factor(double x) {
  if (!(x > 0.0)) throw domain_error("pair potential: coincident bodies (chord factor 0)");
  if (x > 1.0 + kClampTolerance) {
    std::ostringstream msg;
    msg << "pair potential: chord factor " << x << " exceeds 1";
    throw domain_error(msg.str());
  }
  return std::min(x, 1.0);
}

}  // namespace

Partials SplitHamiltonian::partials(const PhaseState& s) const {
  const std::size_t n = s.size();
  Partials p{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
             std::vector<double>(n), std::vector<double>(n)};
  dh1_dp_theta(s, p.dh1_dp_theta);
  dh2_dp_phi(s, p.dh2_dp_phi);
  dh2_dtheta(s, p.dh2_dtheta);
  dh3(s, p.dh3_dtheta, p.dh3_dphi);
  return p;
}

SphereNBodyHamiltonian::SphereNBodyHamiltonian(SphereParams params) : params_(params) {
  params_.validate();
}

void SphereNBodyHamiltonian::check_size(const PhaseState& s) const {
  if (s.size() != params_.n_bodies) {
    std::ostringstream msg;
    msg << "state has " << s.size() << " bodies, Hamiltonian expects " << params_.n_bodies;
    throw dimension_error(msg.str());
  }
}

double SphereNBodyHamiltonian::h1(const PhaseState& s) const {
  check_size(s);
  double sum = 0.0;
  for (const auto& b : s.bodies) sum += b.p_theta * b.p_theta;
  return sum / (2.0 * params_.mass);
}

double SphereNBodyHamiltonian::h2(const PhaseState& s) const {
  check_size(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double q = s.bodies[i].p_phi / sin_checked(s.bodies[i], i);
    sum += q * q;
  }
  return sum / (2.0 * params_.mass);
}

double SphereNBodyHamiltonian::h3(const PhaseState& s) const {
  check_size(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      sum += pair_potential(geodesic_distance(s.bodies[i], s.bodies[j], params_.radius), params_);
    }
  }
  return sum;
}

void SphereNBodyHamiltonian::dh1_dp_theta(const PhaseState& s, std::span<double> out) const {
  check_size(s);
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s.bodies[i].p_theta / params_.mass;
}

void SphereNBodyHamiltonian::dh2_dp_phi(const PhaseState& s, std::span<double> out) const {
  check_size(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double st = sin_checked(s.bodies[i], i);
    out[i] = s.bodies[i].p_phi / (params_.mass * st * st);
  }
}

void SphereNBodyHamiltonian::dh2_dtheta(const PhaseState& s, std::span<double> out) const {
  check_size(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& b = s.bodies[i];
    const double st = sin_checked(b, i);
    out[i] = -b.p_phi * b.p_phi * std::cos(b.theta) / (params_.mass * st * st * st);
  }
}

// dV/dq through the pair's cosine cos(g) = n_i . n_j: dx/dcos(g) = -1 / (3x).
// The phi contribution is computed once per pair and applied with opposite
// signs, so the azimuthal forces cancel pairwise.
void SphereNBodyHamiltonian::dh3(const PhaseState& s, std::span<double> dtheta,
                                 std::span<double> dphi) const {
  check_size(s);
  const std::size_t n = s.size();
  std::fill(dtheta.begin(), dtheta.begin() + n, 0.0);
  std::fill(dphi.begin(), dphi.begin() + n, 0.0);
  const double c0 = std::cos(params_.theta0);

  std::vector<Embedded> unit(n);
  std::vector<double> st(n), ct(n);
  for (std::size_t i = 0; i < n; ++i) {
    unit[i] = unit_vector(s.bodies[i]);
    st[i] = std::sin(s.bodies[i].theta);
    ct[i] = std::cos(s.bodies[i].theta);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = clamp_chord_factor(chord_factor(unit[i], unit[j]));
      const double dv_dcos = pair_potential_slope(x, c0) * (-1.0 / (3.0 * x));
      const double dphi_ij = s.bodies[i].phi - s.bodies[j].phi;
      const double cd = std::cos(dphi_ij);
      const double azimuthal = dv_dcos * (-st[i] * st[j] * std::sin(dphi_ij));
      dtheta[i] += dv_dcos * (ct[i] * st[j] * cd - st[i] * ct[j]);
      dtheta[j] += dv_dcos * (st[i] * ct[j] * cd - ct[i] * st[j]);
      dphi[i] += azimuthal;
      dphi[j] -= azimuthal;
    }
  }
}

double geodesic_distance(const BodyState& a, const BodyState& b, double radius) {
  // atan2 keeps full precision near coincident and antipodal points, where asin/acos do not.
  const auto u = unit_vector(a);
  const auto v = unit_vector(b);
  const double cx = u.y * v.z - u.z * v.y;
  const double cy = u.z * v.x - u.x * v.z;
  const double cz = u.x * v.y - u.y * v.x;
  const double dot = u.x * v.x + u.y * v.y + u.z * v.z;
  return radius * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

double pair_potential(double geodesic, const SphereParams& params) {
  if (!(geodesic > 0.0)) throw domain_error("pair potential: non-positive separation");
  const double x = 2.0 * std::sin(geodesic / (2.0 * params.radius)) / std::sqrt(3.0);
  return pair_potential_of_chord_factor(x, std::cos(params.theta0));
}

double pair_potential_of_chord_factor(double x, double cos_theta0) {
  x = clamp_chord_factor(x);
  const double g = (std::sqrt(1.0 - x * x) - cos_theta0) / x;
  return g * g;
}

double pair_potential_slope(double x, double cos_theta0) {
  x = clamp_chord_factor(x);
  const double root = std::sqrt(1.0 - x * x);
  if (root == 0.0) throw domain_error("pair potential slope diverges at chord factor 1");
  const double g = (root - cos_theta0) / x;
  return 2.0 * g * (cos_theta0 - 1.0 / root) / (x * x);
}

double total_energy(const PhaseState& s, const SphereNBodyHamiltonian& h) { return h.value(s); }

Partials partials(const PhaseState& s, const SphereNBodyHamiltonian& h) { return h.partials(s); }

}  // namespace sesi
