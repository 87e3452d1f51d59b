#include "nschc/initial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nschc/elliptic.hpp"
#include "nschc/ns_solver.hpp"
#include "nschc/operators.hpp"

namespace nschc {

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser applied to the (seed, index) counter
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(counter_hash(seed, index) >> 11) * 0x1.0p-53;
}

namespace {

// Lowest nonconstant mode compatible with the boundary conditions.
double wave_x(const Grid& g) { return (g.periodic() ? 2.0 : 1.0) * std::numbers::pi / g.lx; }

}  // namespace

ScalarField initial_phi(const Grid& g, const IcConfig& ic, const ModelParams& p) {
  ScalarField phi(g);
  const double a = ic.phi_amplitude;
  if (ic.phi == "zero") return phi;
  if (ic.phi == "constant") {
    phi.fill(ic.phi_mean);
  } else if (ic.phi == "spinodal") {
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = a * (2.0 * counter_uniform(ic.seed, k) - 1.0);
    // shift so the discrete mean is the configured one
    const double shift = ic.phi_mean - mean(phi);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] += shift;
  } else if (ic.phi == "tanh_strip") {
    // horizontal strip of phase +1 centred at ly/2 and half as tall as the box
    const double w = std::sqrt(2.0) * p.eps_int;
    const double y0 = 0.25 * g.ly;
    const double y1 = 0.75 * g.ly;
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.yc(j);
      const double prof = std::tanh((y - y0) / w) - std::tanh((y - y1) / w) - 1.0;
      for (int i = 0; i < g.nx; ++i) phi(i, j) = a * prof;
    }
  } else if (ic.phi == "cosine") {
    const double k = wave_x(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) phi(i, j) = ic.phi_mean + a * std::cos(k * g.xc(i));
  } else {
    throw std::invalid_argument("unknown phi generator '" + ic.phi + "'");
  }
  return phi;
}

ScalarField initial_sigma(const Grid& g, const IcConfig& ic) {
  ScalarField s(g);
  if (ic.sigma == "zero") return s;
  if (ic.sigma == "uniform") {
    s.fill(ic.sigma_offset);
  } else if (ic.sigma == "gaussian_bump") {
    const double x0 = 0.5 * g.lx;
    const double y0 = 0.5 * g.ly;
    const double w2 = ic.sigma_width * ic.sigma_width;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double dx = g.xc(i) - x0;
        const double dy = g.yc(j) - y0;
        s(i, j) = ic.sigma_offset + ic.sigma_amplitude * std::exp(-(dx * dx + dy * dy) / w2);
      }
  } else if (ic.sigma == "cosine") {
    const double k = wave_x(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) s(i, j) = ic.sigma_offset + ic.sigma_amplitude * std::cos(k * g.xc(i));
  } else {
    throw std::invalid_argument("unknown sigma generator '" + ic.sigma + "'");
  }
  return s;
}

MacVelocity initial_velocity(const Grid& g, const IcConfig& ic) {
  MacVelocity v(g);
  if (ic.velocity == "zero") return v;
  if (ic.velocity != "taylor_green") throw std::invalid_argument("unknown velocity generator '" + ic.velocity + "'");
  if (!g.periodic()) throw std::invalid_argument("taylor_green velocity needs a periodic grid");
  const double a = 2.0 * std::numbers::pi / g.lx;
  const double b = 2.0 * std::numbers::pi / g.ly;
  const double A = ic.velocity_amplitude;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) v.x(i, j) = A * std::sin(a * i * g.hx()) * std::cos(b * g.yc(j));
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v.y(i, j) = -A * (a / b) * std::cos(a * g.xc(i)) * std::sin(b * j * g.hy());
  v.sync_periodic();

  // discrete projection; a no-op up to rounding when a hx == b hy
  const ScalarField div = velocity_divergence(v);
  if (max_abs(div) > 1e-12 * (1.0 + A * a)) {
    ScalarField rhs(g);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = -div[k];
    const ScalarField q = neumann_solve(rhs, SolveControls{1e-13, 2000}).u;  // Delta q = div v
    const FaceField gq = gradient(q);
    for (std::size_t k = 0; k < v.xs().size(); ++k) v.xs()[k] -= gq.xs()[k];
    for (std::size_t k = 0; k < v.ys().size(); ++k) v.ys()[k] -= gq.ys()[k];
    v.sync_periodic();
  }
  return v;
}

SimState initial_state(const RunConfig& c) {
  const Grid g = c.make_grid();
  SimState s = make_state(initial_phi(g, c.ic, c.params), initial_sigma(g, c.ic), c.params);
  s.v = initial_velocity(g, c.ic);
  return s;
}

}  // namespace nschc
