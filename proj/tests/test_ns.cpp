#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nschc/coupled.hpp"
#include "nschc/ns_solver.hpp"
#include "nschc/operators.hpp"
#include "support.hpp"

using namespace nschc;
using testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams two_fluid() {
  ModelParams p;
  p.rho1 = 1.0;
  p.rho2 = 3.0;
  p.nu1 = 0.02;
  p.nu2 = 0.05;
  p.m_star = 1e-3;
  p.m_star_upper = 2e-3;
  p.chi = 0.3;
  p.eps_int = 0.05;
  p.eps_reg = 0.02;
  return p;
}

double face_inner(const FaceField& a, const FaceField& b) { return testing::dot(a, b); }

MacVelocity taylor_green(const Grid& g) {
  MacVelocity v(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) v.x(i, j) = std::sin(2 * pi * i * g.hx()) * std::cos(2 * pi * g.yc(j));
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v.y(i, j) = -std::cos(2 * pi * g.xc(i)) * std::sin(2 * pi * j * g.hy());
  v.sync_periodic();
  return v;
}

}  // namespace

TEST_CASE("convection is skew-symmetric for any mass flux") {
  for (BoundaryMode bc : {BoundaryMode::neumann_noslip, BoundaryMode::periodic}) {
    const Grid g = Grid::make(24, 20, 1.0, 0.9, bc);
    const FaceField W = testing::random_faces(g, 1);
    const MacVelocity u = testing::random_faces(g, 2);
    const MacVelocity w = testing::random_faces(g, 3);
    const double uu = face_inner(convection(W, u), u);
    CHECK(std::abs(uu) <= 1e-12 * std::sqrt(face_inner(u, u) * face_inner(W, W)) / g.hx());
    // <N u, w> = -<u, N w>
    const double a = face_inner(convection(W, u), w);
    const double b = face_inner(u, convection(W, w));
    CHECK(a == doctest::Approx(-b).epsilon(1e-10));
  }
}

TEST_CASE("viscous operator: symmetric, its energy is the dissipation, and it is -nu Lap on periodic solenoidal fields") {
  const ModelParams p = two_fluid();
  for (BoundaryMode bc : {BoundaryMode::neumann_noslip, BoundaryMode::periodic}) {
    const Grid g = Grid::make(20, 16, 1.0, 0.8, bc);
    const ScalarField phi = random_field(g, 4, -1.0, 1.0);
    ScalarField nuc(g);
    for (std::size_t k = 0; k < nuc.size(); ++k) nuc[k] = nu(phi[k], p);
    const MacVelocity u = testing::random_faces(g, 5);
    const MacVelocity w = testing::random_faces(g, 6);
    const double a = face_inner(viscous_operator(u, nuc), w);
    const double b = face_inner(u, viscous_operator(w, nuc));
    CHECK(a == doctest::Approx(b).epsilon(1e-11));
    const double d = viscous_dissipation(u, phi, p);
    CHECK(d > 0.0);
    CHECK(d == doctest::Approx(face_inner(viscous_operator(u, nuc), u)).epsilon(1e-11));
  }
  const Grid g = Grid::make(16, 16, 1.0, 1.0, BoundaryMode::periodic);
  const MacVelocity v = testing::random_solenoidal(g, 7);
  const double nu0 = 0.3;
  const MacVelocity A = viscous_operator(v, ScalarField(g, nu0));
  const double ix2 = 1.0 / (g.hx() * g.hx());
  const double iy2 = 1.0 / (g.hy() * g.hy());
  auto wrap = [](int k, int n) { return (k + n) % n; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double lu = (v.x(wrap(i + 1, g.nx), j) - 2 * v.x(i, j) + v.x(wrap(i - 1, g.nx), j)) * ix2 +
                        (v.x(i, wrap(j + 1, g.ny)) - 2 * v.x(i, j) + v.x(i, wrap(j - 1, g.ny))) * iy2;
      const double lv = (v.y(wrap(i + 1, g.nx), j) - 2 * v.y(i, j) + v.y(wrap(i - 1, g.nx), j)) * ix2 +
                        (v.y(i, wrap(j + 1, g.ny)) - 2 * v.y(i, j) + v.y(i, wrap(j - 1, g.ny))) * iy2;
      CHECK(A.x(i, j) == doctest::Approx(-nu0 * lu).scale(1.0).epsilon(1e-10));
      CHECK(A.y(i, j) == doctest::Approx(-nu0 * lv).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("face density, relative flux and kinetic energy") {
  const Grid g = Grid::make(10, 8, 1.0, 1.0);
  ModelParams p = two_fluid();
  const ScalarField phi = random_field(g, 8, -1.0, 1.0);
  const FaceField rf = face_density(phi, p);
  CHECK(rf.x(3, 2) == doctest::Approx(0.5 * (rho(phi(2, 2), p) + rho(phi(3, 2), p))));
  CHECK(rf.y(4, 0) == doctest::Approx(rho(phi(4, 0), p)));

  const ScalarField mu = random_field(g, 9);
  const FaceField J = relative_flux(phi, mu, p);
  CHECK(J.x(0, 3) == 0.0);
  CHECK(J.max_abs() > 0.0);
  p.rho2 = p.rho1;
  CHECK(relative_flux(phi, mu, p).max_abs() == 0.0);

  p = two_fluid();
  const MacVelocity v = testing::random_faces(g, 10);
  double ke = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double u2 = 0.5 * (v.x(i, j) * v.x(i, j) + v.x(i + 1, j) * v.x(i + 1, j)) +
                        0.5 * (v.y(i, j) * v.y(i, j) + v.y(i, j + 1) * v.y(i, j + 1));
      ke += 0.5 * rho_hat(phi(i, j), p) * u2;
    }
  CHECK(kinetic_energy(v, phi, p) == doctest::Approx(ke * g.cell_area()).epsilon(1e-13));
}

TEST_CASE("projection leaves a divergence-free velocity") {
  const Grid g = Grid::make(32, 32, 1.0, 1.0);
  const ModelParams p = two_fluid();
  const ScalarField phi = random_field(g, 11, -0.9, 0.9);
  const ScalarField sigma = random_field(g, 12, 0.0, 1.0);
  const ScalarField mu = compute_mu(phi, sigma, p);
  MacVelocity v = testing::random_solenoidal(g, 13, 0.01);
  NsSolver solver(g, p);
  ScalarField pressure = balanced_pressure(phi, mu, sigma, p);
  for (int n = 0; n < 5; ++n) {
    const NsStepOutput out = solver.step({v, phi, mu, sigma, 1e-3, &pressure, &phi});
    CHECK(max_abs(velocity_divergence(out.v)) <= 1e-8 * out.v.max_abs());
    for (int j = 0; j < g.ny; ++j) CHECK(out.v.x(0, j) == 0.0);
    v = out.v;
    pressure = out.pressure;
  }
}

TEST_CASE("a gradient force is balanced exactly: fluid at rest stays at rest") {
  const Grid g = Grid::make(32, 32, 1.0, 1.0);
  ModelParams p = two_fluid();
  p.rho2 = p.rho1;  // no relative flux
  const ScalarField phi = random_field(g, 14, -0.9, 0.9);
  const ScalarField mu(g, 0.7);     // constant potential: force 0.7 grad phi
  const ScalarField sigma(g, 0.0);
  const NsStepOutput out = ns_step({MacVelocity(g), phi, mu, sigma, 1e-2, nullptr, nullptr}, p, {1e-13, 500});
  CHECK(out.v.max_abs() <= 1e-11);
}

TEST_CASE("without forcing the kinetic energy does not grow") {
  const Grid g = Grid::make(32, 32, 1.0, 1.0);
  ModelParams p = two_fluid();
  p.chi = 0.0;
  ScalarField phi(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) phi(i, j) = 0.9 * std::tanh((g.xc(i) - 0.5) / 0.1);
  const ScalarField mu(g, 0.0);
  const ScalarField sigma(g, 0.0);
  MacVelocity v = testing::random_solenoidal(g, 15, 0.02);
  NsSolver solver(g, p);
  ScalarField pressure(g);
  double ke = kinetic_energy(v, phi, p);
  for (int n = 0; n < 20; ++n) {
    const NsStepOutput out = solver.step({v, phi, mu, sigma, 2e-3, &pressure, &phi});
    CHECK(out.kinetic_energy <= ke * (1 + 1e-12));
    ke = out.kinetic_energy;
    v = out.v;
    pressure = out.pressure;
  }
}

TEST_CASE("periodic Taylor-Green decay at 64^2") {
  const Grid g = Grid::make(64, 64, 1.0, 1.0, BoundaryMode::periodic);
  ModelParams p;
  p.nu1 = p.nu2 = 0.05;
  p.eps_reg = 0.02;
  const ScalarField phi(g);
  const ScalarField zero(g);
  MacVelocity v = taylor_green(g);
  NsSolver solver(g, p);
  ScalarField pressure(g);
  const double ke0 = kinetic_energy(v, phi, p);
  const double dt = 2e-3;
  const int steps = 100;
  for (int n = 0; n < steps; ++n) {
    const NsStepOutput out = solver.step({v, phi, zero, zero, dt, &pressure, &phi});
    v = out.v;
    pressure = out.pressure;
  }
  const double k2 = 2.0 * 4 * pi * pi;
  const double expected = std::exp(-2.0 * 0.05 * k2 * steps * dt);
  CHECK(std::abs(kinetic_energy(v, phi, p) / ke0 / expected - 1.0) < 0.02);
}

TEST_CASE("transport limit") {
  const Grid g = Grid::make(16, 16, 1.0, 1.0);
  const ModelParams p = two_fluid();
  const ScalarField phi(g, 0.2);
  const ScalarField mu(g, 0.0);
  CHECK(std::isinf(cfl_ns(MacVelocity(g), phi, mu, p)));
  MacVelocity v(g);
  v.x(5, 5) = 2.0;
  CHECK(cfl_ns(v, phi, mu, p, 0.5) == doctest::Approx(0.5 * g.hx() / 2.0));
}
