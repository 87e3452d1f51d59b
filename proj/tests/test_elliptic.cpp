#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nschc/elliptic.hpp"
#include "nschc/errors.hpp"
#include "nschc/operators.hpp"
#include "nschc/spectral.hpp"
#include "support.hpp"

using namespace nschc;
using testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

// Dense reference: assemble -div(c grad .) entry by entry and solve
// (A + 1 1^T / n) u = f by Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(const Grid& g, const FaceField& c, const std::vector<double>& f) {
  const int n = static_cast<int>(g.cells());
  std::vector<double> A(static_cast<std::size_t>(n) * n, 1.0 / n);
  auto a = [&](int r, int col) -> double& { return A[static_cast<std::size_t>(r) * n + col]; };
  const double ix2 = 1.0 / (g.hx() * g.hx());
  const double iy2 = 1.0 / (g.hy() * g.hy());
  auto link = [&](int p, int q, double w) {
    a(p, p) += w;
    a(p, q) -= w;
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int p = static_cast<int>(g.cell(i, j));
      // east / west
      if (i + 1 < g.nx) link(p, static_cast<int>(g.cell(i + 1, j)), c.x(i + 1, j) * ix2);
      else if (g.periodic()) link(p, static_cast<int>(g.cell(0, j)), c.x(0, j) * ix2);
      if (i > 0) link(p, static_cast<int>(g.cell(i - 1, j)), c.x(i, j) * ix2);
      else if (g.periodic()) link(p, static_cast<int>(g.cell(g.nx - 1, j)), c.x(0, j) * ix2);
      if (j + 1 < g.ny) link(p, static_cast<int>(g.cell(i, j + 1)), c.y(i, j + 1) * iy2);
      else if (g.periodic()) link(p, static_cast<int>(g.cell(i, 0)), c.y(i, 0) * iy2);
      if (j > 0) link(p, static_cast<int>(g.cell(i, j - 1)), c.y(i, j) * iy2);
      else if (g.periodic()) link(p, static_cast<int>(g.cell(i, g.ny - 1)), c.y(i, 0) * iy2);
    }
  std::vector<double> b = f;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
    for (int col = 0; col < n; ++col) std::swap(a(k, col), a(piv, col));
    std::swap(b[k], b[piv]);
    for (int r = k + 1; r < n; ++r) {
      const double m = a(r, k) / a(k, k);
      for (int col = k; col < n; ++col) a(r, col) -= m * a(k, col);
      b[r] -= m * b[k];
    }
  }
  std::vector<double> u(n);
  for (int k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (int col = k + 1; col < n; ++col) s -= a(k, col) * u[col];
    u[k] = s / a(k, k);
  }
  return u;
}

ModelParams mobility_params(double lo, double hi) {
  ModelParams p;
  p.m_star = lo;
  p.m_star_upper = hi;
  return p;
}

ScalarField mean_free(ScalarField f) {
  remove_mean(f.values());
  return f;
}

}  // namespace

TEST_CASE("spectral eigenvalues match the stencil") {
  for (bool per : {false, true}) {
    const Grid g = Grid::make(16, 12, 1.0, 0.7, per ? BoundaryMode::periodic : BoundaryMode::neumann_noslip);
    const int kx = 3;
    const int ky = 2;
    ScalarField mode(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double ax = per ? 2 * pi * kx * g.xc(i) / g.lx : pi * kx * g.xc(i) / g.lx;
        const double ay = per ? 2 * pi * ky * g.yc(j) / g.ly : pi * ky * g.yc(j) / g.ly;
        mode(i, j) = std::cos(ax) * std::cos(ay);
      }
    const double lam = laplacian_eigenvalue(kx, g.nx, g.hx(), per) + laplacian_eigenvalue(ky, g.ny, g.hy(), per);
    const ScalarField l = laplacian(mode);
    for (std::size_t k = 0; k < mode.size(); ++k) CHECK(-l[k] == doctest::Approx(lam * mode[k]).scale(1.0).epsilon(1e-10));

    // and SpectralInverse with symbol 1/lambda inverts it
    SpectralInverse inv(g, [](double lam) { return lam > 0 ? 1.0 / lam : 0.0; });
    std::vector<double> out(g.cells());
    inv.apply(l.values(), out);
    for (std::size_t k = 0; k < mode.size(); ++k) CHECK(out[k] == doctest::Approx(-mode[k]).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("flux Poisson solve agrees with a dense direct solve") {
  for (bool per : {false, true}) {
    const Grid g = Grid::make(7, 5, 1.1, 0.8, per ? BoundaryMode::periodic : BoundaryMode::neumann_noslip);
    const ScalarField a = random_field(g, 21, 0.2, 3.0);
    const FaceField c = face_harmonic_average(a);
    const ScalarField f = mean_free(random_field(g, 22));
    ScalarField u(g);
    FluxPoisson solver(g);
    const SolveReport rep = solver.solve(c, f.values(), u.values(), {1e-13, 500});
    CHECK(rep.converged);
    const std::vector<double> ref = dense_solve(g, c, f.storage());
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(u[k] == doctest::Approx(ref[k]).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("residual contract: converged means ||A u - f|| <= tol ||f||") {
  const Grid g = Grid::make(48, 40, 1.0, 1.0);
  for (double tol : {1e-6, 1e-10, 1e-12}) {
    const ScalarField a = random_field(g, 23, 0.1, 10.0);
    const ScalarField f = mean_free(random_field(g, 24));
    const EllipticSolution s = solve({a, f, {tol, 1000}});
    REQUIRE(s.report.converged);
    const ScalarField Au = apply_flux_operator(face_harmonic_average(a), s.u);
    double r = 0.0, n = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      r += (Au[k] - f[k]) * (Au[k] - f[k]);
      n += f[k] * f[k];
    }
    CHECK(std::sqrt(r / n) <= tol);
    CHECK(s.report.residual <= tol);
    CHECK(std::abs(mean(s.u)) < 1e-14);
  }
}

TEST_CASE("non-convergence is reported, not hidden") {
  const Grid g = Grid::make(32, 32, 1.0, 1.0);
  const ScalarField a = random_field(g, 25, 0.01, 100.0);
  const ScalarField f = mean_free(random_field(g, 26));
  const EllipticSolution s = solve({a, f, {1e-14, 1}});
  CHECK_FALSE(s.report.converged);
  CHECK(s.report.residual > 1e-14);
}

TEST_CASE("solvability of the singular problem") {
  const Grid g = Grid::make(16, 16, 1.0, 1.0);
  ScalarField f = random_field(g, 27);
  CHECK_THROWS_AS(neumann_solve(f), SolvabilityError);
  f = mean_free(f);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] += 1e-15;  // rounding-level mean is removed
  CHECK_NOTHROW(neumann_solve(f));
  const ScalarField zero(g);
  const EllipticSolution s = neumann_solve(zero);
  CHECK(max_abs(s.u) == 0.0);
}

TEST_CASE("Neumann eigenfunction: exact for the discrete operator, second order against the continuum") {
  std::vector<double> err;
  for (int n : {16, 32, 64}) {
    const Grid g = Grid::make(n, n, 1.0, 1.0);
    ScalarField exact(g), f(g);
    const double lam_h = laplacian_eigenvalue(1, n, g.hx(), false) + laplacian_eigenvalue(2, n, g.hy(), false);
    ScalarField fh(g);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        exact(i, j) = std::cos(pi * g.xc(i)) * std::cos(2 * pi * g.yc(j));
        f(i, j) = 5 * pi * pi * exact(i, j);
        fh(i, j) = lam_h * exact(i, j);
      }
    const EllipticSolution discrete = neumann_solve(fh, {1e-13, 200});
    CHECK(testing::l2(discrete.u, exact) < 1e-11);
    err.push_back(testing::l2(neumann_solve(f, {1e-13, 200}).u, exact));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("G_a is self-adjoint, norm-equivalent to N, and reduces to N/m0") {
  const Grid g = Grid::make(16, 16, 1.0, 1.0);
  const ModelParams p = mobility_params(0.02, 0.2);
  const auto [mlo, mhi] = mobility_bounds(p);
  const SolveControls tight{1e-13, 500};
  for (unsigned probe = 0; probe < 10; ++probe) {
    const ScalarField a = random_field(g, 100 + probe, -1.0, 1.0);
    const ScalarField f = mean_free(random_field(g, 200 + probe));
    const ScalarField h = mean_free(random_field(g, 300 + probe));
    const ScalarField Gf = var_coeff_solve(a, f, p, tight).u;
    const ScalarField Gh = var_coeff_solve(a, h, p, tight).u;
    const double lhs = dot(Gf, h);
    const double rhs = dot(f, Gh);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), std::abs(rhs)));

    const double gff = dot(Gf, f);
    const double nff = dot(neumann_solve(f, tight).u, f);
    CHECK(mlo * gff <= nff * (1 + 1e-12));
    CHECK(nff <= mhi * gff * (1 + 1e-12));
  }
  const ModelParams flat = mobility_params(0.25, 0.25);
  const ScalarField a = random_field(g, 400);
  const ScalarField f = mean_free(random_field(g, 401));
  const ScalarField G = var_coeff_solve(a, f, flat, tight).u;
  const ScalarField N = neumann_solve(f, tight).u;
  for (std::size_t k = 0; k < G.size(); ++k) CHECK(G[k] == doctest::Approx(N[k] / 0.25).scale(1.0).epsilon(1e-10));
}

TEST_CASE("pressure solve sign and weighting") {
  const Grid g = Grid::make(24, 20, 1.0, 1.0);
  const ScalarField rho = random_field(g, 31, 1.0, 4.0);
  const ScalarField rhs = mean_free(random_field(g, 32));
  const EllipticSolution s = pressure_solve(rho, rhs, {1e-12, 500});
  REQUIRE(s.report.converged);
  // div((1/rho)_f grad p) with 1/rho_f = 1/(arithmetic mean of rho)
  const FaceField gp = gradient(s.u);
  FaceField flux(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) flux.x(i, j) = gp.x(i, j) * 2.0 / (rho(i - 1, j) + rho(i, j));
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) flux.y(i, j) = gp.y(i, j) * 2.0 / (rho(i, j - 1) + rho(i, j));
  const ScalarField d = divergence_face_flux(flux);
  CHECK(testing::l2(d, rhs) <= 1e-11 * std::sqrt(dot(rhs, rhs) * g.cell_area()));
  ScalarField bad = rho;
  bad[3] = 0.0;
  CHECK_THROWS_AS(pressure_solve(bad, rhs), std::invalid_argument);
}
