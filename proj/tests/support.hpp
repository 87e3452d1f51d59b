#pragma once

// Shared fixtures for the unit tests. Random data comes from std::mt19937_64
// so the tests do not depend on the generator they are checking.

#include <cmath>
#include <numbers>
#include <random>

#include "nschc/grid.hpp"

namespace testing {

inline nschc::ScalarField random_field(const nschc::Grid& g, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  nschc::ScalarField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = u(rng);
  return f;
}

inline nschc::FaceField random_faces(const nschc::Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  nschc::FaceField f(g);
  for (auto& v : f.xs()) v = u(rng);
  for (auto& v : f.ys()) v = u(rng);
  f.sync_periodic();
  f.zero_boundary_normal();
  return f;
}

/// Discretely divergence-free MAC velocity from a random node stream function
/// psi (zero on walls): u = d psi / dy, v = -d psi / dx.
inline nschc::MacVelocity random_solenoidal(const nschc::Grid& g, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int nxn = g.nx + 1;
  const int nyn = g.ny + 1;
  std::vector<double> psi(static_cast<std::size_t>(nxn) * nyn, 0.0);
  auto at = [&](int i, int j) -> double& { return psi[static_cast<std::size_t>(j) * nxn + i]; };
  for (int j = 0; j < nyn; ++j)
    for (int i = 0; i < nxn; ++i) {
      const bool wall = !g.periodic() && (i == 0 || j == 0 || i == g.nx || j == g.ny);
      at(i, j) = wall ? 0.0 : scale * u(rng);
    }
  if (g.periodic()) {
    for (int j = 0; j < nyn; ++j) at(g.nx, j) = at(0, j);
    for (int i = 0; i < nxn; ++i) at(i, g.ny) = at(i, 0);
  }
  nschc::MacVelocity v(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) v.x(i, j) = (at(i, j + 1) - at(i, j)) / g.hy();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v.y(i, j) = -(at(i + 1, j) - at(i, j)) / g.hx();
  v.sync_periodic();
  v.zero_boundary_normal();
  return v;
}

inline double l2(const nschc::ScalarField& a, const nschc::ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s * a.grid().cell_area());
}

inline double dot(const nschc::FaceField& a, const nschc::FaceField& b) {
  const nschc::Grid& g = a.grid();
  const int xl = g.periodic() ? g.nx - 1 : g.nx;
  const int yl = g.periodic() ? g.ny - 1 : g.ny;
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= xl; ++i) s += a.x(i, j) * b.x(i, j);
  for (int j = 0; j <= yl; ++j)
    for (int i = 0; i < g.nx; ++i) s += a.y(i, j) * b.y(i, j);
  return s * g.cell_area();
}

}  // namespace testing
