#include "nschc/elliptic.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "nschc/errors.hpp"
#include "nschc/operators.hpp"

namespace nschc {

void enforce_solvability(std::span<double> f) {
  const double n = static_cast<double>(f.size());
  const double avg = kernels::sum(f) / n;
  const double rms = std::sqrt(kernels::dot(f, f) / n);
  if (std::abs(avg) > 1e-10 * rms) {
    throw SolvabilityError("right-hand side mean " + std::to_string(avg) +
                           " is not zero (rms " + std::to_string(rms) + ")");
  }
  if (avg != 0.0) kernels::add_scalar(-avg, f);
}

void remove_mean(std::span<double> u) {
  const double avg = kernels::sum(u) / static_cast<double>(u.size());
  kernels::add_scalar(-avg, u);
}

ScalarField apply_flux_operator(const FaceField& coef, const ScalarField& u) {
  ScalarField out(u.grid());
  kernels::flux_apply(u.grid(), coef.xs().data(), coef.ys().data(), u.data(), out.data());
  return out;
}

FluxPoisson::FluxPoisson(const Grid& grid)
    : inverse_(grid, [](double lambda) { return lambda > 0.0 ? 1.0 / lambda : 0.0; }) {}

namespace {

// Geometric mean of the extreme interior face coefficients.
double reference_coefficient(const FaceField& c) {
  const Grid& g = c.grid();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const int i0 = g.periodic() ? 0 : 1;
  for (int j = 0; j < g.ny; ++j)
    for (int i = i0; i < g.nx; ++i) {
      lo = std::min(lo, c.x(i, j));
      hi = std::max(hi, c.x(i, j));
    }
  for (int j = i0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      lo = std::min(lo, c.y(i, j));
      hi = std::max(hi, c.y(i, j));
    }
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    throw std::invalid_argument("face coefficient must be positive and finite");
  }
  return std::sqrt(lo * hi);
}

}  // namespace

SolveReport FluxPoisson::solve(const FaceField& coef, std::span<const double> f, std::span<double> u,
                               const SolveControls& controls) {
  const Grid& g = grid();
  std::vector<double> rhs(f.begin(), f.end());
  enforce_solvability(rhs);
  const double scale = 1.0 / reference_coefficient(coef);
  auto apply = [&](std::span<const double> in, std::span<double> out) {
    kernels::flux_apply(g, coef.xs().data(), coef.ys().data(), in.data(), out.data());
  };
  auto precond = [&](std::span<const double> in, std::span<double> out) {
    inverse_.apply(in, out);
    for (double& v : out) v *= scale;
  };
  auto inner = [](std::span<const double> a, std::span<const double> b) { return kernels::dot(a, b); };
  remove_mean(u);
  SolveReport report = pcg(apply, precond, inner, rhs, u, controls);
  remove_mean(u);
  return report;
}

EllipticSolution solve(const EllipticProblem& problem) {
  const Grid& g = problem.rhs.grid();
  const FaceField coef = face_harmonic_average(problem.coefficient);
  EllipticSolution sol{ScalarField(g), {}};
  FluxPoisson poisson(g);
  sol.report = poisson.solve(coef, problem.rhs.values(), sol.u.values(), problem.controls);
  return sol;
}

EllipticSolution neumann_solve(const ScalarField& f, const SolveControls& controls) {
  return solve({ScalarField(f.grid(), 1.0), f, controls});
}

EllipticSolution var_coeff_solve(const ScalarField& a, const ScalarField& f, const ModelParams& p,
                                 const SolveControls& controls) {
  ScalarField m(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) m[k] = mobility(a[k], p);
  return solve({std::move(m), f, controls});
}

EllipticSolution pressure_solve(const ScalarField& rho_field, const ScalarField& rhs,
                                const SolveControls& controls) {
  ScalarField inv(rho_field.grid());
  for (std::size_t k = 0; k < inv.size(); ++k) {
    if (!(rho_field[k] > 0.0)) throw std::invalid_argument("density must be positive");
    inv[k] = 1.0 / rho_field[k];
  }
  ScalarField neg(rhs.grid());
  for (std::size_t k = 0; k < rhs.size(); ++k) neg[k] = -rhs[k];
  return solve({std::move(inv), std::move(neg), controls});
}

}  // namespace nschc
