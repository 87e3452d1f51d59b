#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nschc/coeffs.hpp"
#include "nschc/grid.hpp"
#include "nschc/kernels.hpp"
#include "nschc/spectral.hpp"

namespace nschc {

struct SolveControls {
  double tolerance = 1e-10;  // relative l2 residual ||A u - f|| / ||f||
  int max_iterations = 500;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

/// Preconditioned conjugate gradients for A x = b.
///
/// `inner(a, b)` is the inner product in which A and the preconditioner are
/// self-adjoint (the plain dot product for symmetric problems). Convergence
/// is always judged on the l2 norm of b - A x, recomputed from scratch at the
/// end. x holds the initial guess on entry.
template <class Apply, class Precond, class Inner>
SolveReport pcg(Apply&& apply, Precond&& precond, Inner&& inner, std::span<const double> b,
                std::span<double> x, const SolveControls& controls) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  const double bnorm = std::sqrt(kernels::dot(b, b));
  SolveReport report;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return report;
  }
  auto true_residual = [&] {
    apply(std::span<const double>(x), std::span<double>(q));
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
    return std::sqrt(kernels::dot(r, r)) / bnorm;
  };

  report.residual = true_residual();
  if (report.residual <= controls.tolerance) return report;
  precond(std::span<const double>(r), std::span<double>(z));
  p = z;
  double rz = inner(std::span<const double>(r), std::span<const double>(z));
  for (int it = 1; it <= controls.max_iterations; ++it) {
    apply(std::span<const double>(p), std::span<double>(q));
    const double pq = inner(std::span<const double>(p), std::span<const double>(q));
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    kernels::axpy(alpha, p, x);
    kernels::axpy(-alpha, q, r);
    report.iterations = it;
    const double rel = std::sqrt(kernels::dot(r, r)) / bnorm;
    if (rel <= controls.tolerance) {
      report.residual = true_residual();
      if (report.residual <= controls.tolerance) return report;
    }
    precond(std::span<const double>(r), std::span<double>(z));
    const double rz_new = inner(std::span<const double>(r), std::span<const double>(z));
    kernels::xpay(z, rz_new / rz, p);
    rz = rz_new;
  }
  report.residual = true_residual();
  report.converged = report.residual <= controls.tolerance;
  return report;
}

/// Zero-flux (or periodic) problem -div(c grad u) = f with face coefficient c.
/// The right-hand side must have zero mean up to rounding: if
/// |mean f| <= 1e-10 rms(f) the mean is removed, otherwise SolvabilityError
/// is thrown. The solution is returned with zero mean.
///
/// Preconditioned with the exact inverse of the constant-coefficient operator
/// at the geometric mean of the face coefficients. Holds its own transform
/// buffers; create one per thread.
class FluxPoisson {
 public:
  explicit FluxPoisson(const Grid& grid);

  const Grid& grid() const { return inverse_.grid(); }

  SolveReport solve(const FaceField& coef, std::span<const double> f, std::span<double> u,
                    const SolveControls& controls = {});

 private:
  SpectralInverse inverse_;  // pseudo-inverse of -Delta_h
};

/// Removes a rounding-level mean from f, or throws SolvabilityError.
void enforce_solvability(std::span<double> f);

/// Subtracts the mean.
void remove_mean(std::span<double> u);

/// -div(c grad u) with face coefficients c (zero-flux walls in walled mode).
ScalarField apply_flux_operator(const FaceField& coef, const ScalarField& u);

struct EllipticProblem {
  ScalarField coefficient;  // positive cell values, averaged harmonically onto faces
  ScalarField rhs;
  SolveControls controls;
};

struct EllipticSolution {
  ScalarField u;
  SolveReport report;
};

/// -div(a_f grad u) = f with a_f the harmonic face average of `coefficient`.
EllipticSolution solve(const EllipticProblem& problem);

/// Inverse Neumann Laplacian: -Delta u = f, mean-zero u.
EllipticSolution neumann_solve(const ScalarField& f, const SolveControls& controls = {});

/// G_a f: -div(m(a) grad u) = f with the model mobility m evaluated at the
/// cell field a and averaged harmonically onto faces.
EllipticSolution var_coeff_solve(const ScalarField& a, const ScalarField& f, const ModelParams& p,
                                 const SolveControls& controls = {});

/// Projection Poisson problem div((1/rho) grad p) = rhs; 1/rho is averaged
/// harmonically onto faces, i.e. faces see 1/(arithmetic mean of rho).
EllipticSolution pressure_solve(const ScalarField& rho_field, const ScalarField& rhs,
                                const SolveControls& controls = {});

}  // namespace nschc
