#include "nschc/operators.hpp"

#include <stdexcept>

#include "nschc/kernels.hpp"

namespace nschc {

FaceField gradient(const ScalarField& f) {
  FaceField g(f.grid());
  kernels::gradient(f.grid(), f.data(), g.xs().data(), g.ys().data());
  return g;
}

ScalarField divergence_unchecked(const FaceField& flux) {
  ScalarField out(flux.grid());
  kernels::divergence(flux.grid(), flux.xs().data(), flux.ys().data(), out.data());
  return out;
}

ScalarField divergence_face_flux(const FaceField& flux) {
  const Grid& g = flux.grid();
  if (!g.periodic()) {
    for (int j = 0; j < g.ny; ++j) {
      if (flux.x(0, j) != 0.0 || flux.x(g.nx, j) != 0.0) {
        throw std::invalid_argument("nonzero x-boundary flux in neumann_noslip mode");
      }
    }
    for (int i = 0; i < g.nx; ++i) {
      if (flux.y(i, 0) != 0.0 || flux.y(i, g.ny) != 0.0) {
        throw std::invalid_argument("nonzero y-boundary flux in neumann_noslip mode");
      }
    }
  }
  return divergence_unchecked(flux);
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.grid());
  kernels::laplacian(f.grid(), f.data(), out.data());
  return out;
}

double integrate(const ScalarField& f) { return kernels::sum(f.values()) * f.grid().cell_area(); }

double mean(const ScalarField& f) { return kernels::sum(f.values()) / static_cast<double>(f.size()); }

double max_abs(const ScalarField& f) { return kernels::max_abs(f.values()); }
double min_value(const ScalarField& f) { return kernels::min_value(f.values()); }
double max_value(const ScalarField& f) { return kernels::max_value(f.values()); }
double dot(const ScalarField& a, const ScalarField& b) { return kernels::dot(a.values(), b.values()); }

FaceField face_average(const ScalarField& f) {
  const Grid& g = f.grid();
  FaceField out(g);
  const bool per = g.periodic();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) out.x(i, j) = 0.5 * (f(i - 1, j) + f(i, j));
    out.x(0, j) = per ? 0.5 * (f(g.nx - 1, j) + f(0, j)) : f(0, j);
    out.x(g.nx, j) = per ? out.x(0, j) : f(g.nx - 1, j);
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) out.y(i, j) = 0.5 * (f(i, j - 1) + f(i, j));
    out.y(i, 0) = per ? 0.5 * (f(i, g.ny - 1) + f(i, 0)) : f(i, 0);
    out.y(i, g.ny) = per ? out.y(i, 0) : f(i, g.ny - 1);
  }
  return out;
}

namespace {
double harmonic(double a, double b) {
  const double s = a + b;
  return s != 0.0 ? 2.0 * a * b / s : 0.0;
}
}  // namespace

FaceField face_harmonic_average(const ScalarField& f) {
  const Grid& g = f.grid();
  FaceField out(g);
  const bool per = g.periodic();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) out.x(i, j) = harmonic(f(i - 1, j), f(i, j));
    out.x(0, j) = per ? harmonic(f(g.nx - 1, j), f(0, j)) : 0.0;
    out.x(g.nx, j) = per ? out.x(0, j) : 0.0;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) out.y(i, j) = harmonic(f(i, j - 1), f(i, j));
    out.y(i, 0) = per ? harmonic(f(i, g.ny - 1), f(i, 0)) : 0.0;
    out.y(i, g.ny) = per ? out.y(i, 0) : 0.0;
  }
  return out;
}

double face_norm_squared(const FaceField& f) {
  const Grid& g = f.grid();
  const int xlast = g.periodic() ? g.nx - 1 : g.nx;
  const int ylast = g.periodic() ? g.ny - 1 : g.ny;
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= xlast; ++i) s += f.x(i, j) * f.x(i, j);
  }
  for (int j = 0; j <= ylast; ++j) {
    for (int i = 0; i < g.nx; ++i) s += f.y(i, j) * f.y(i, j);
  }
  return s * g.cell_area();
}

}  // namespace nschc
