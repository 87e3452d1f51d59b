#pragma once

#include <memory>

#include "nschc/coeffs.hpp"
#include "nschc/elliptic.hpp"
#include "nschc/grid.hpp"

namespace nschc {

struct ChState {
  ScalarField phi;
  ScalarField mu;
};

struct ChDiagnostics {
  double free_energy = 0.0;
  double separation_margin = 0.0;
  double mass_drift = 0.0;          // |mean phi^{n+1} - mean phi^n|
  double scheme_dissipation = 0.0;  // dt * sum_f m_f |grad mu_scheme|^2 hx hy
  SolveReport report;
};

struct ChStepResult {
  ChState state;
  ChDiagnostics diagnostics;
};

/// Stabilisation constant S = Psi_0''(1 - eps_reg)/2 + |theta0| of the linear
/// scheme (Psi_0'' is largest at the edge of the regularisation window).
double stabilization_constant(const ModelParams& p);

/// mu = -eps Delta phi + Psi_eps'(phi)/eps + beta'(phi) sigma.
ScalarField compute_mu(const ScalarField& phi, const ScalarField& sigma, const ModelParams& p);

/// eps/2 |grad phi|^2 + Psi_eps(phi)/eps integrated (face gradients).
double free_energy(const ScalarField& phi, const ModelParams& p);

/// 1 - max |phi|.
double separation_margin(const ScalarField& phi);

/// Stabilised semi-implicit convective Cahn-Hilliard step
///   phi^{n+1} + dt A_m L phi^{n+1}
///     = phi^n - dt div(phi_f v) - dt A_m[(Psi_eps'(phi^n) - S phi^n)/eps + beta'(phi^n) sigma]
/// with L = -eps Delta + S/eps and A_m = -div(m(phi^n)_f grad .). The system is
/// self-adjoint in the L inner product and solved there by PCG. Throws
/// SolverFailure on non-convergence, InvariantViolation if |phi| > 1.5.
class ChSolver {
 public:
  ChSolver(const Grid& grid, ModelParams params, SolveControls controls = {});

  double stabilization() const { return S_; }

  ChStepResult step(const ChState& state, const MacVelocity& v, const ScalarField& sigma, double dt);

 private:
  Grid grid_;
  ModelParams params_;
  SolveControls controls_;
  double S_;
  std::unique_ptr<SpectralInverse> precond_;
  double precond_key_dt_ = -1.0;
  double precond_key_m_ = -1.0;
};

ChStepResult ch_step(const ChState& state, const MacVelocity& v, const ScalarField& sigma, double dt,
                     const ModelParams& p, const SolveControls& controls = {});

}  // namespace nschc
