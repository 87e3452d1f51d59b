#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "nschc/kernels.hpp"
#include "nschc/operators.hpp"
#include "support.hpp"

using namespace nschc;
using testing::random_field;

namespace {
const Grid walled = Grid::make(37, 29, 1.3, 0.9);
const Grid periodic = Grid::make(32, 24, 1.0, 0.75, BoundaryMode::periodic);
}  // namespace

TEST_CASE("grid construction validates its arguments") {
  CHECK_THROWS_AS(Grid::make(3, 10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Grid::make(10, 10, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Grid::make(10, 10, 1, -2), std::invalid_argument);
  CHECK_THROWS_AS(Grid::make(10, 10, 1, NAN), std::invalid_argument);
  CHECK_THROWS_AS(boundary_mode_from_string("dirichlet"), std::invalid_argument);
  const Grid g = Grid::make(5, 4, 2.0, 1.0);
  CHECK(g.cells() == 20);
  CHECK(g.x_faces() == 24);
  CHECK(g.y_faces() == 25);
  CHECK(g.xc(0) == doctest::Approx(0.2));
  CHECK(boundary_mode_from_string(to_string(BoundaryMode::periodic)) == BoundaryMode::periodic);
}

TEST_CASE("laplacian is bitwise div of grad") {
  for (const Grid& g : {walled, periodic}) {
    const ScalarField f = random_field(g, 1);
    const ScalarField a = laplacian(f);
    const ScalarField b = divergence_face_flux(gradient(f));
    CHECK(a.storage() == b.storage());
  }
}

TEST_CASE("laplacian of a quadratic is exact in the interior") {
  const Grid& g = walled;
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = g.xc(i) * g.xc(i) + 3.0 * g.yc(j) * g.yc(j);
  const ScalarField l = laplacian(f);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) CHECK(l(i, j) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("constants are in the kernel of gradient and laplacian") {
  for (const Grid& g : {walled, periodic}) {
    const ScalarField c(g, 2.5);
    CHECK(max_abs(laplacian(c)) == 0.0);
    CHECK(gradient(c).max_abs() == 0.0);
  }
}

TEST_CASE("discrete divergence theorem and boundary check") {
  for (const Grid& g : {walled, periodic}) {
    const FaceField F = testing::random_faces(g, 3);
    CHECK(std::abs(integrate(divergence_face_flux(F))) < 1e-12);
  }
  FaceField F = testing::random_faces(walled, 4);
  F.x(0, 3) = 0.5;
  CHECK_THROWS_AS(divergence_face_flux(F), std::invalid_argument);
  CHECK_NOTHROW(divergence_unchecked(F));
}

TEST_CASE("summation by parts: -<f, div F> = <grad f, F>") {
  for (const Grid& g : {walled, periodic}) {
    const ScalarField f = random_field(g, 5);
    const FaceField F = testing::random_faces(g, 6);
    const double lhs = -dot(f, divergence_face_flux(F)) * g.cell_area();
    const double rhs = testing::dot(gradient(f), F);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("face averages") {
  const Grid& g = walled;
  const ScalarField f = random_field(g, 7, 0.5, 2.0);
  const FaceField a = face_average(f);
  const FaceField h = face_harmonic_average(f);
  CHECK(a.x(3, 2) == doctest::Approx(0.5 * (f(2, 2) + f(3, 2))));
  CHECK(h.y(4, 5) == doctest::Approx(2.0 * f(4, 4) * f(4, 5) / (f(4, 4) + f(4, 5))));
  CHECK(h.x(0, 1) == 0.0);
  CHECK(h.y(2, g.ny) == 0.0);
  CHECK(a.x(g.nx, 3) == f(g.nx - 1, 3));
}

TEST_CASE("parallel kernels are bitwise equal to the serial reference at any thread count") {
  const int saved = omp_get_max_threads();
  for (const Grid& g : {walled, periodic, Grid::make(200, 150, 1, 1)}) {
    const ScalarField f = random_field(g, 8);
    const FaceField c = testing::random_faces(g, 9);
    std::vector<double> gx_s(g.x_faces()), gy_s(g.y_faces()), lap_s(g.cells()), div_s(g.cells()), fa_s(g.cells());
    kernels::serial::gradient(g, f.data(), gx_s.data(), gy_s.data());
    kernels::serial::laplacian(g, f.data(), lap_s.data());
    kernels::serial::divergence(g, c.xs().data(), c.ys().data(), div_s.data());
    kernels::serial::flux_apply(g, c.xs().data(), c.ys().data(), f.data(), fa_s.data());
    const double sum_s = kernels::serial::sum(f.values());
    const double dot_s = kernels::serial::dot(f.values(), lap_s);
    const double max_s = kernels::serial::max_abs(lap_s);
    std::vector<double> y_s(f.storage());
    kernels::serial::axpy(0.3, lap_s, y_s);

    for (int threads : {1, 2, 3, 8}) {
      omp_set_num_threads(threads);
      CAPTURE(threads);
      std::vector<double> gx(g.x_faces()), gy(g.y_faces()), lap(g.cells()), div(g.cells()), fa(g.cells());
      kernels::gradient(g, f.data(), gx.data(), gy.data());
      kernels::laplacian(g, f.data(), lap.data());
      kernels::divergence(g, c.xs().data(), c.ys().data(), div.data());
      kernels::flux_apply(g, c.xs().data(), c.ys().data(), f.data(), fa.data());
      CHECK(gx == gx_s);
      CHECK(gy == gy_s);
      CHECK(lap == lap_s);
      CHECK(div == div_s);
      CHECK(fa == fa_s);
      CHECK(kernels::sum(f.values()) == sum_s);
      CHECK(kernels::dot(f.values(), lap) == dot_s);
      CHECK(kernels::max_abs(lap) == max_s);
      std::vector<double> y(f.storage());
      kernels::axpy(0.3, lap, y);
      CHECK(y == y_s);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("flux_apply with unit coefficients is minus the laplacian") {
  for (const Grid& g : {walled, periodic}) {
    const ScalarField f = random_field(g, 10);
    FaceField one(g, 1.0);
    std::vector<double> out(g.cells());
    kernels::flux_apply(g, one.xs().data(), one.ys().data(), f.data(), out.data());
    const ScalarField l = laplacian(f);
    for (std::size_t k = 0; k < out.size(); ++k) CHECK(out[k] == doctest::Approx(-l[k]).epsilon(1e-12));
  }
}

TEST_CASE("face norm counts periodic duplicates once") {
  const FaceField one(periodic, 1.0);
  CHECK(face_norm_squared(one) == doctest::Approx(2.0 * periodic.area()));
  const FaceField w(walled, 1.0);
  const double expected = static_cast<double>(walled.x_faces() + walled.y_faces()) * walled.cell_area();
  CHECK(face_norm_squared(w) == doctest::Approx(expected));
}
