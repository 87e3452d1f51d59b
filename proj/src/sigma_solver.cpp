#include "nschc/sigma_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nschc/errors.hpp"
#include "nschc/operators.hpp"

namespace nschc {

SigmaSolver::SigmaSolver(const Grid& grid, ModelParams params, SolveControls controls)
    : grid_(grid), params_(std::move(params)), controls_(controls) {}

FaceField SigmaSolver::drift(const MacVelocity& v, const ScalarField& phi) const {
  const Grid& g = grid_;
  ScalarField bp(g);
  for (std::size_t k = 0; k < bp.size(); ++k) bp[k] = beta_prime(phi[k], params_);
  const FaceField bpf = face_average(bp);
  FaceField u = gradient(phi);
  const auto n = u.xs().size();
  for (std::size_t k = 0; k < n; ++k) u.xs()[k] = v.xs()[k] - bpf.xs()[k] * u.xs()[k];
  for (std::size_t k = 0; k < u.ys().size(); ++k) u.ys()[k] = v.ys()[k] - bpf.ys()[k] * u.ys()[k];
  u.zero_boundary_normal();
  u.sync_periodic();
  return u;
}

namespace {

// Sum of outward face rates per cell, max over cells.
double max_outflow_rate(const FaceField& u) {
  const Grid& g = u.grid();
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double out = std::max(u.x(i + 1, j), 0.0) / g.hx() + std::max(-u.x(i, j), 0.0) / g.hx() +
                         std::max(u.y(i, j + 1), 0.0) / g.hy() + std::max(-u.y(i, j), 0.0) / g.hy();
      worst = std::max(worst, out);
    }
  }
  return worst;
}

}  // namespace

double SigmaSolver::cfl(const MacVelocity& v, const ScalarField& phi, double safety) const {
  const double rate = max_outflow_rate(drift(v, phi));
  return rate > 0.0 ? safety / rate : std::numeric_limits<double>::infinity();
}

SigmaStepOutput SigmaSolver::step(const SigmaStepInput& in) {
  const Grid& g = grid_;
  const double dt = in.dt;
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("sigma step needs dt >= 0");
  if (min_value(in.sigma) < 0.0) throw PositivityError("sigma input has negative values");

  SigmaStepOutput out{in.sigma, 0, 0.0, false, {}};
  if (dt == 0.0) return out;

  const FaceField u = drift(in.v, in.phi);
  out.cfl_violated = dt * max_outflow_rate(u) > 1.0;

  // Upwinded face fluxes U * sigma_upwind.
  FaceField flux(g);
  const ScalarField& s = in.sigma;
  const bool per = g.periodic();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (!per && (i == 0 || i == g.nx)) continue;
      const int il = i == 0 ? g.nx - 1 : i - 1;
      const int ir = i == g.nx ? 0 : i;
      const double w = u.x(i, j);
      flux.x(i, j) = w * (w > 0.0 ? s(il, j) : s(ir, j));
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    if (!per && (j == 0 || j == g.ny)) continue;
    const int jl = j == 0 ? g.ny - 1 : j - 1;
    const int jr = j == g.ny ? 0 : j;
    for (int i = 0; i < g.nx; ++i) {
      const double w = u.y(i, j);
      flux.y(i, j) = w * (w > 0.0 ? s(i, jl) : s(i, jr));
    }
  }
  const ScalarField div = divergence_unchecked(flux);
  ScalarField rhs(g);
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = s[k] - dt * div[k];

  // Backward-Euler diffusion (I - dt Delta) sigma = rhs. The spectral inverse
  // is exact for this operator, so PCG converges in one or two iterations.
  if (!heat_ || heat_dt_ != dt) {
    heat_ = std::make_unique<SpectralInverse>(g, [dt](double lambda) { return 1.0 / (1.0 + dt * lambda); });
    heat_dt_ = dt;
  }
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    kernels::laplacian(g, x.data(), y.data());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] - dt * y[k];
  };
  auto precond = [&](std::span<const double> x, std::span<double> y) { heat_->apply(x, y); };
  auto inner = [](std::span<const double> a, std::span<const double> b) { return kernels::dot(a, b); };
  ScalarField next(g);
  heat_->apply(rhs.values(), next.values());
  out.report = pcg(apply, precond, inner, rhs.values(), next.values(), controls_);
  if (!out.report.converged) {
    throw SolverFailure("sigma diffusion solve did not converge (residual " +
                        std::to_string(out.report.residual) + ")");
  }

  // Transport and diffusion conserve mass up to rounding; restore it exactly.
  const double mass_target = kernels::sum(s.values());
  kernels::add_scalar((mass_target - kernels::sum(next.values())) / static_cast<double>(next.size()),
                      next.values());

  double lowest = 0.0;
  for (std::size_t k = 0; k < next.size(); ++k) {
    if (next[k] < 0.0) {
      lowest = std::min(lowest, next[k]);
      next[k] = 0.0;
      ++out.clamp_events;
    }
  }
  if (lowest < -1e-13) {
    throw PositivityError("sigma dropped to " + std::to_string(lowest) + " (dt above transport limit?)");
  }
  if (out.clamp_events > 0) {
    const double now = kernels::sum(next.values());
    if (now > 0.0) {
      const double scale = mass_target / now;
      for (double& x : next.values()) x *= scale;
    }
  }
  if (!next.all_finite()) throw SolverFailure("sigma step produced non-finite values");

  out.mass_drift = std::abs(integrate(next) - integrate(in.sigma));
  out.sigma = std::move(next);
  return out;
}

SigmaStepOutput sigma_step(const SigmaStepInput& in, const ModelParams& p, const SolveControls& controls) {
  SigmaSolver solver(in.sigma.grid(), p, controls);
  return solver.step(in);
}

double cfl_sigma(const MacVelocity& v, const ScalarField& phi, const ModelParams& p, double safety) {
  return SigmaSolver(phi.grid(), p).cfl(v, phi, safety);
}

double entropy(const ScalarField& sigma) {
  double s = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const double x = sigma[k];
    if (x > 1e-300) s += x * (std::log(x) - 1.0);
  }
  return s * sigma.grid().cell_area();
}

double sigma_sup_norm(const ScalarField& sigma) { return max_value(sigma); }

}  // namespace nschc
