#include "nschc/ch_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nschc/errors.hpp"
#include "nschc/operators.hpp"

namespace nschc {

double stabilization_constant(const ModelParams& p) {
  return 0.5 * psi0(1.0 - p.eps_reg, p).second + std::abs(p.theta0);
}

ScalarField compute_mu(const ScalarField& phi, const ScalarField& sigma, const ModelParams& p) {
  ScalarField mu = laplacian(phi);
  const double eps = p.eps_int;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    mu[k] = -eps * mu[k] + psi_eps(phi[k], p).first / eps + beta_prime(phi[k], p) * sigma[k];
  }
  return mu;
}

double free_energy(const ScalarField& phi, const ModelParams& p) {
  const double grad = face_norm_squared(gradient(phi));
  double bulk = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) bulk += psi_eps(phi[k], p).value;
  return 0.5 * p.eps_int * grad + bulk * phi.grid().cell_area() / p.eps_int;
}

double separation_margin(const ScalarField& phi) { return 1.0 - max_abs(phi); }

ChSolver::ChSolver(const Grid& grid, ModelParams params, SolveControls controls)
    : grid_(grid), params_(std::move(params)), controls_(controls), S_(stabilization_constant(params_)) {}

namespace {

double geometric_face_mean(const FaceField& c) {
  const Grid& g = c.grid();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const int first = g.periodic() ? 0 : 1;
  for (int j = 0; j < g.ny; ++j)
    for (int i = first; i < g.nx; ++i) {
      lo = std::min(lo, c.x(i, j));
      hi = std::max(hi, c.x(i, j));
    }
  for (int j = first; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      lo = std::min(lo, c.y(i, j));
      hi = std::max(hi, c.y(i, j));
    }
  return std::sqrt(lo * hi);
}

}  // namespace

ChStepResult ChSolver::step(const ChState& state, const MacVelocity& v, const ScalarField& sigma, double dt) {
  const Grid& g = grid_;
  const ModelParams& p = params_;
  const double eps = p.eps_int;
  const double S = S_;
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("CH step needs dt >= 0");

  ChStepResult res{state, {}};
  if (dt == 0.0) {
    res.diagnostics.free_energy = free_energy(state.phi, p);
    res.diagnostics.separation_margin = separation_margin(state.phi);
    return res;
  }

  const ScalarField& phi = state.phi;
  const std::size_t n = phi.size();

  ScalarField mob(g);
  for (std::size_t k = 0; k < n; ++k) mob[k] = mobility(phi[k], p);
  const FaceField mf = face_harmonic_average(mob);

  auto apply_A = [&](const double* x, double* y) { kernels::flux_apply(g, mf.xs().data(), mf.ys().data(), x, y); };
  auto apply_L = [&](const double* x, double* y) {
    kernels::laplacian(g, x, y);
    for (std::size_t k = 0; k < n; ++k) y[k] = -eps * y[k] + (S / eps) * x[k];
  };

  // Explicit part of the scheme chemical potential.
  ScalarField lagged(g);
  for (std::size_t k = 0; k < n; ++k) {
    lagged[k] = (psi_eps(phi[k], p).first - S * phi[k]) / eps + beta_prime(phi[k], p) * sigma[k];
  }

  // Centred advective flux phi_f v; with the face-averaged capillary force this
  // makes the advection and force work cancel exactly.
  FaceField adv = face_average(phi);
  for (std::size_t k = 0; k < adv.xs().size(); ++k) adv.xs()[k] *= v.xs()[k];
  for (std::size_t k = 0; k < adv.ys().size(); ++k) adv.ys()[k] *= v.ys()[k];
  const ScalarField div_adv = divergence_unchecked(adv);

  ScalarField rhs(g);
  apply_A(lagged.data(), rhs.data());
  for (std::size_t k = 0; k < n; ++k) rhs[k] = phi[k] - dt * div_adv[k] - dt * rhs[k];

  std::vector<double> t1(n), t2(n);
  auto apply_M = [&](std::span<const double> x, std::span<double> y) {
    apply_L(x.data(), t1.data());
    apply_A(t1.data(), y.data());
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + dt * y[k];
  };
  auto inner_L = [&](std::span<const double> a, std::span<const double> b) {
    apply_L(b.data(), t2.data());
    return kernels::dot(a, t2);
  };

  const double mbar = geometric_face_mean(mf);
  if (!precond_ || precond_key_dt_ != dt || precond_key_m_ != mbar) {
    auto symbol = [=](double lambda) { return 1.0 / (1.0 + dt * mbar * lambda * (eps * lambda + S / eps)); };
    if (precond_) {
      precond_->reset(symbol);
    } else {
      precond_ = std::make_unique<SpectralInverse>(g, symbol);
    }
    precond_key_dt_ = dt;
    precond_key_m_ = mbar;
  }
  auto precond = [&](std::span<const double> x, std::span<double> y) { precond_->apply(x, y); };

  ScalarField next = phi;
  res.diagnostics.report = pcg(apply_M, precond, inner_L, rhs.values(), next.values(), controls_);
  if (!res.diagnostics.report.converged) {
    throw SolverFailure("Cahn-Hilliard solve did not converge (residual " +
                        std::to_string(res.diagnostics.report.residual) + ")");
  }
  // The mean is invariant in exact arithmetic; remove the solver's share of drift.
  kernels::add_scalar((kernels::sum(phi.values()) - kernels::sum(next.values())) / static_cast<double>(n),
                      next.values());
  if (!next.all_finite()) throw SolverFailure("Cahn-Hilliard step produced non-finite values");
  if (max_abs(next) > 1.5) {
    throw InvariantViolation("phase field left the band |phi| <= 1.5 (max " + std::to_string(max_abs(next)) + ")");
  }

  // Scheme chemical potential L phi^{n+1} + lagged; its dissipation closes the
  // discrete energy inequality of the decoupled step.
  ScalarField mu_s(g);
  apply_L(next.data(), mu_s.data());
  for (std::size_t k = 0; k < n; ++k) mu_s[k] += lagged[k];
  FaceField gmu = gradient(mu_s);
  double diss = 0.0;
  for (std::size_t k = 0; k < gmu.xs().size(); ++k) gmu.xs()[k] *= std::sqrt(mf.xs()[k]);
  for (std::size_t k = 0; k < gmu.ys().size(); ++k) gmu.ys()[k] *= std::sqrt(mf.ys()[k]);
  diss = face_norm_squared(gmu);

  res.diagnostics.mass_drift = std::abs(mean(next) - mean(phi));
  res.diagnostics.scheme_dissipation = dt * diss;
  res.diagnostics.free_energy = free_energy(next, p);
  res.diagnostics.separation_margin = separation_margin(next);
  res.state.mu = std::move(mu_s);
  res.state.phi = std::move(next);
  return res;
}

ChStepResult ch_step(const ChState& state, const MacVelocity& v, const ScalarField& sigma, double dt,
                     const ModelParams& p, const SolveControls& controls) {
  ChSolver solver(state.phi.grid(), p, controls);
  return solver.step(state, v, sigma, dt);
}

}  // namespace nschc
