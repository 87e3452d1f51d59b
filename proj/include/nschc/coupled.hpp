#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nschc/ch_solver.hpp"
#include "nschc/coeffs.hpp"
#include "nschc/elliptic.hpp"
#include "nschc/grid.hpp"
#include "nschc/ns_solver.hpp"
#include "nschc/sigma_solver.hpp"

namespace nschc {

struct SimState {
  double t = 0.0;
  long step = 0;
  MacVelocity v;
  ScalarField phi;
  ScalarField mu;
  ScalarField sigma;
  ScalarField pressure;  // empty until the first step (then well-balanced)
  long clamp_events = 0;
  long cfl_warnings = 0;
  long phi_excursions = 0;  // cells seen beyond |phi| = 1 + 10 eps_reg
};

/// Zero velocity and pressure-free state with mu computed from phi, sigma.
SimState make_state(const ScalarField& phi, const ScalarField& sigma, const ModelParams& p);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double mixing = 0.0;       // eps/2 |grad phi|^2 + Psi_eps(phi)/eps
  double entropy = 0.0;      // sigma (ln sigma - 1)
  double interaction = 0.0;  // beta(phi) sigma
  double total = 0.0;
};

struct DissipationBreakdown {
  double viscous = 0.0;  // 2 nu |Dv|^2
  double mu = 0.0;       // m |grad mu|^2
  double sigma = 0.0;    // |2 grad sqrt(sigma) + sqrt(sigma) grad beta(phi)|^2
  double total = 0.0;
};

EnergyBreakdown energies(const SimState& s, const ModelParams& p);
DissipationBreakdown dissipations(const SimState& s, const ModelParams& p);
double total_energy(const SimState& s, const ModelParams& p);
double total_dissipation(const SimState& s, const ModelParams& p);

/// One row of the time series; field order is the CSV column order.
struct DiagnosticsRecord {
  double t = 0.0;
  long step = 0;
  double mass_phi = 0.0;
  double mass_sigma = 0.0;
  double E_kin = 0.0;
  double E_mix = 0.0;
  double E_ent = 0.0;
  double E_int = 0.0;
  double E_total = 0.0;
  double D_visc = 0.0;
  double D_mu = 0.0;
  double D_sigma = 0.0;
  double min_sigma = 0.0;
  double max_abs_phi = 0.0;
  double sep_margin = 0.0;
  double sigma_linf = 0.0;       // running max of ||sigma||_inf
  double energy_residual = 0.0;  // E_n + sum_k dt_k D_k - E_0
};

/// r_n = E_n + sum_{k=1..n} (t_k - t_{k-1}) D_k - E_0 recomputed from records.
std::vector<double> energy_inequality_residual(const std::vector<DiagnosticsRecord>& history);

struct SimControls {
  double dt_max = 1e-3;      // upper bound on the step
  double cfl_safety = 0.4;   // fraction of the transport limits actually used
  bool adaptive = true;      // cap dt by the transport limits
  SolveControls solve;
};

/// Lie splitting sigma -> (phi, mu) -> v with the lag pattern
///   sigma^{n+1} from (sigma^n, v^n, phi^n)
///   phi^{n+1}, mu^{n+1} from (phi^n, v^n, sigma^{n+1})
///   v^{n+1} from (v^n, phi^{n+1}, mu^{n+1}, sigma^{n+1}).
class Simulation {
 public:
  Simulation(SimState initial, ModelParams params, SimControls controls = {});

  const SimState& state() const { return state_; }
  const ModelParams& params() const { return params_; }
  const std::vector<DiagnosticsRecord>& history() const { return history_; }
  double stabilization() const { return ch_.stabilization(); }

  /// Largest step allowed by dt_max and the transport limits.
  double stable_dt() const;

  /// One coupled step of size dt; sub-solver errors are rethrown with the
  /// step number and time prepended.
  const DiagnosticsRecord& advance(double dt);

  /// Steps until t_end (the last step is shortened to land on it) or until
  /// max_steps; on_step sees every new record.
  void run(double t_end, std::optional<long> max_steps = std::nullopt,
           const std::function<void(const Simulation&, const DiagnosticsRecord&)>& on_step = {});

 private:
  DiagnosticsRecord record() const;

  ModelParams params_;
  SimControls controls_;
  SimState state_;
  SigmaSolver sigma_;
  ChSolver ch_;
  NsSolver ns_;
  std::vector<DiagnosticsRecord> history_;
  double dissipation_integral_ = 0.0;
  double sigma_linf_ = 0.0;
};

/// Distance used by the continuous-dependence estimate:
/// sum rho_f |dv|^2 + |grad dphi|^2 + |mean dphi|^2 + c |dsigma|^2, square-rooted.
double dependence_distance(const SimState& a, const SimState& b, const ModelParams& p, double c = 1.0);

struct GrowthReport {
  std::vector<double> times;
  std::vector<double> ratios;  // d(t) / d(0)
  double initial_distance = 0.0;
  double sup_ratio = 1.0;
};

/// Runs twin simulations from (phi0, sigma0) and (phi0 + delta0 * perturbation,
/// sigma0) with the same fixed dt and reports the growth of their distance.
/// delta0 = 0 gives ratio 1 identically.
GrowthReport continuous_dependence_probe(const ScalarField& phi0, const ScalarField& sigma0,
                                         const ScalarField& perturbation, double delta0,
                                         const ModelParams& p, double dt, long steps,
                                         const SolveControls& solve = {}, double c = 1.0);

/// Smooth mean-zero perturbation cos(pi x / lx) cos(pi y / ly) (periodic:
/// cos(2 pi x / lx) cos(2 pi y / ly)).
ScalarField smooth_perturbation(const Grid& g);

}  // namespace nschc
