#include "nschc/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nschc/errors.hpp"
#include "nschc/operators.hpp"

namespace nschc {

SimState make_state(const ScalarField& phi, const ScalarField& sigma, const ModelParams& p) {
  SimState s;
  s.v = MacVelocity(phi.grid());
  s.phi = phi;
  s.sigma = sigma;
  s.mu = compute_mu(phi, sigma, p);
  return s;
}

EnergyBreakdown energies(const SimState& s, const ModelParams& p) {
  EnergyBreakdown e;
  e.kinetic = kinetic_energy(s.v, s.phi, p);
  e.mixing = free_energy(s.phi, p);
  e.entropy = entropy(s.sigma);
  double inter = 0.0;
  for (std::size_t k = 0; k < s.phi.size(); ++k) inter += beta(s.phi[k], p) * s.sigma[k];
  e.interaction = inter * s.phi.grid().cell_area();
  e.total = e.kinetic + e.mixing + e.entropy + e.interaction;
  return e;
}

DissipationBreakdown dissipations(const SimState& s, const ModelParams& p) {
  const Grid& g = s.phi.grid();
  DissipationBreakdown d;
  d.viscous = viscous_dissipation(s.v, s.phi, p);

  ScalarField mob(g);
  for (std::size_t k = 0; k < mob.size(); ++k) mob[k] = mobility(s.phi[k], p);
  const FaceField mf = face_harmonic_average(mob);
  FaceField gmu = gradient(s.mu);
  for (std::size_t k = 0; k < gmu.xs().size(); ++k) gmu.xs()[k] *= std::sqrt(mf.xs()[k]);
  for (std::size_t k = 0; k < gmu.ys().size(); ++k) gmu.ys()[k] *= std::sqrt(mf.ys()[k]);
  d.mu = face_norm_squared(gmu);

  ScalarField root(g);
  ScalarField b(g);
  for (std::size_t k = 0; k < root.size(); ++k) {
    root[k] = std::sqrt(std::max(s.sigma[k], 0.0));
    b[k] = beta(s.phi[k], p);
  }
  FaceField flux = gradient(root);
  const FaceField rootf = face_average(root);
  const FaceField gb = gradient(b);
  for (std::size_t k = 0; k < flux.xs().size(); ++k) flux.xs()[k] = 2.0 * flux.xs()[k] + rootf.xs()[k] * gb.xs()[k];
  for (std::size_t k = 0; k < flux.ys().size(); ++k) flux.ys()[k] = 2.0 * flux.ys()[k] + rootf.ys()[k] * gb.ys()[k];
  d.sigma = face_norm_squared(flux);

  d.total = d.viscous + d.mu + d.sigma;
  return d;
}

double total_energy(const SimState& s, const ModelParams& p) { return energies(s, p).total; }
double total_dissipation(const SimState& s, const ModelParams& p) { return dissipations(s, p).total; }

std::vector<double> energy_inequality_residual(const std::vector<DiagnosticsRecord>& history) {
  std::vector<double> r;
  r.reserve(history.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < history.size(); ++n) {
    if (n > 0) acc += (history[n].t - history[n - 1].t) * (history[n].D_visc + history[n].D_mu + history[n].D_sigma);
    r.push_back(history[n].E_total + acc - history[0].E_total);
  }
  return r;
}

Simulation::Simulation(SimState initial, ModelParams params, SimControls controls)
    : params_(std::move(params)),
      controls_(controls),
      state_(std::move(initial)),
      sigma_(state_.phi.grid(), params_, controls_.solve),
      ch_(state_.phi.grid(), params_, controls_.solve),
      ns_(state_.phi.grid(), params_, controls_.solve) {
  const Grid& g = state_.phi.grid();
  if (state_.v.xs().empty()) state_.v = MacVelocity(g);
  if (state_.mu.size() != g.cells()) state_.mu = compute_mu(state_.phi, state_.sigma, params_);
  if (state_.pressure.size() != g.cells()) {
    state_.pressure = balanced_pressure(state_.phi, state_.mu, state_.sigma, params_, controls_.solve);
  }
  if (min_value(state_.sigma) < 0.0) throw PositivityError("initial sigma has negative values");
  sigma_linf_ = max_value(state_.sigma);
  history_.push_back(record());
}

double Simulation::stable_dt() const {
  double dt = controls_.dt_max;
  if (controls_.adaptive) {
    dt = std::min(dt, sigma_.cfl(state_.v, state_.phi, controls_.cfl_safety));
    dt = std::min(dt, ns_.cfl(state_.v, state_.phi, state_.mu, controls_.cfl_safety));
  }
  return dt;
}

DiagnosticsRecord Simulation::record() const {
  const SimState& s = state_;
  const EnergyBreakdown e = energies(s, params_);
  const DissipationBreakdown d = dissipations(s, params_);
  DiagnosticsRecord r;
  r.t = s.t;
  r.step = s.step;
  r.mass_phi = integrate(s.phi);
  r.mass_sigma = integrate(s.sigma);
  r.E_kin = e.kinetic;
  r.E_mix = e.mixing;
  r.E_ent = e.entropy;
  r.E_int = e.interaction;
  r.E_total = e.total;
  r.D_visc = d.viscous;
  r.D_mu = d.mu;
  r.D_sigma = d.sigma;
  r.min_sigma = min_value(s.sigma);
  r.max_abs_phi = max_abs(s.phi);
  r.sep_margin = 1.0 - r.max_abs_phi;
  r.sigma_linf = std::max(sigma_linf_, max_value(s.sigma));
  r.energy_residual = history_.empty() ? 0.0 : e.total + dissipation_integral_ - history_.front().E_total;
  return r;
}

namespace {

template <class E>
[[noreturn]] void rethrow_with(const std::string& ctx, const E& e) {
  throw E(ctx + e.what());
}

}  // namespace

const DiagnosticsRecord& Simulation::advance(double dt) {
  std::ostringstream ctx;
  ctx << "step " << state_.step + 1 << " (t = " << state_.t << "): ";
  try {
    SimState& s = state_;
    SigmaStepOutput so = sigma_.step({s.sigma, s.v, s.phi, dt});
    s.clamp_events += so.clamp_events;
    if (so.cfl_violated) ++s.cfl_warnings;

    ChStepResult ch = ch_.step({s.phi, s.mu}, s.v, so.sigma, dt);
    NsStepOutput ns = ns_.step({s.v, ch.state.phi, ch.state.mu, so.sigma, dt, &s.pressure, &s.phi});
    if (ns.cfl_violated) ++s.cfl_warnings;

    const double band = 1.0 + 10.0 * params_.eps_reg;
    for (double x : ch.state.phi.values())
      if (std::abs(x) > band) ++s.phi_excursions;

    s.sigma = std::move(so.sigma);
    s.phi = std::move(ch.state.phi);
    s.mu = std::move(ch.state.mu);
    s.v = std::move(ns.v);
    s.pressure = std::move(ns.pressure);
    s.t += dt;
    s.step += 1;
  } catch (const PositivityError& e) {
    rethrow_with(ctx.str(), e);
  } catch (const InvariantViolation& e) {
    rethrow_with(ctx.str(), e);
  } catch (const SolverFailure& e) {
    rethrow_with(ctx.str(), e);
  } catch (const SolvabilityError& e) {
    rethrow_with(ctx.str(), e);
  }
  DiagnosticsRecord r = record();
  dissipation_integral_ += dt * (r.D_visc + r.D_mu + r.D_sigma);
  r.energy_residual = r.E_total + dissipation_integral_ - history_.front().E_total;
  sigma_linf_ = r.sigma_linf;
  history_.push_back(r);
  return history_.back();
}

void Simulation::run(double t_end, std::optional<long> max_steps,
                     const std::function<void(const Simulation&, const DiagnosticsRecord&)>& on_step) {
  long taken = 0;
  while (state_.t < t_end && (!max_steps || taken < *max_steps)) {
    const double remaining = t_end - state_.t;
    if (std::isfinite(t_end) && remaining <= 1e-12 * std::max(1.0, t_end)) break;
    const double dt = std::min(stable_dt(), remaining);
    if (!(dt > 0.0)) throw SolverFailure("time step collapsed to zero");
    const DiagnosticsRecord& r = advance(dt);
    ++taken;
    if (on_step) on_step(*this, r);
  }
}

double dependence_distance(const SimState& a, const SimState& b, const ModelParams& p, double c) {
  const Grid& g = a.phi.grid();
  const FaceField rho = face_density(a.phi, p);
  FaceField dv(g);
  for (std::size_t k = 0; k < dv.xs().size(); ++k) dv.xs()[k] = std::sqrt(rho.xs()[k]) * (a.v.xs()[k] - b.v.xs()[k]);
  for (std::size_t k = 0; k < dv.ys().size(); ++k) dv.ys()[k] = std::sqrt(rho.ys()[k]) * (a.v.ys()[k] - b.v.ys()[k]);
  ScalarField dphi(g);
  ScalarField dsig(g);
  for (std::size_t k = 0; k < dphi.size(); ++k) {
    dphi[k] = a.phi[k] - b.phi[k];
    dsig[k] = a.sigma[k] - b.sigma[k];
  }
  const double mean_d = mean(dphi);
  const double y = face_norm_squared(dv) + face_norm_squared(gradient(dphi)) + mean_d * mean_d +
                   c * dot(dsig, dsig) * g.cell_area();
  return std::sqrt(y);
}

GrowthReport continuous_dependence_probe(const ScalarField& phi0, const ScalarField& sigma0,
                                         const ScalarField& perturbation, double delta0,
                                         const ModelParams& p, double dt, long steps,
                                         const SolveControls& solve, double c) {
  ScalarField phi1 = phi0;
  for (std::size_t k = 0; k < phi1.size(); ++k) phi1[k] += delta0 * perturbation[k];
  SimControls controls;
  controls.dt_max = dt;
  controls.adaptive = false;
  controls.solve = solve;
  Simulation a(make_state(phi0, sigma0, p), p, controls);
  Simulation b(make_state(phi1, sigma0, p), p, controls);

  GrowthReport rep;
  rep.initial_distance = dependence_distance(a.state(), b.state(), p, c);
  rep.times.push_back(0.0);
  rep.ratios.push_back(1.0);
  for (long n = 0; n < steps; ++n) {
    a.advance(dt);
    b.advance(dt);
    const double d = dependence_distance(a.state(), b.state(), p, c);
    const double ratio = rep.initial_distance > 0.0 ? d / rep.initial_distance : 1.0;
    rep.times.push_back(a.state().t);
    rep.ratios.push_back(ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
  }
  return rep;
}

ScalarField smooth_perturbation(const Grid& g) {
  ScalarField f(g);
  const double k = g.periodic() ? 2.0 : 1.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      f(i, j) = std::cos(k * std::numbers::pi * g.xc(i) / g.lx) * std::cos(k * std::numbers::pi * g.yc(j) / g.ly);
  return f;
}

}  // namespace nschc
