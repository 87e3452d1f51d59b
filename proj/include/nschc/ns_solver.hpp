#pragma once

#include <memory>

#include "nschc/coeffs.hpp"
#include "nschc/elliptic.hpp"
#include "nschc/grid.hpp"

namespace nschc {

struct NsStepInput {
  const MacVelocity& v;
  const ScalarField& phi;  // phase field at the new time level
  const ScalarField& mu;
  const ScalarField& sigma;
  double dt = 0.0;
  const ScalarField* pressure = nullptr;      // previous pressure; balanced pressure if null
  const ScalarField* phi_previous = nullptr;  // phase field before the CH step; phi if null
};

struct NsStepOutput {
  MacVelocity v;
  ScalarField pressure;
  double kinetic_energy = 0.0;
  bool cfl_violated = false;
  SolveReport momentum_report;
  SolveReport pressure_report;
};

/// Face density: arithmetic average of rho_hat(phi) (adjacent cell on walls).
FaceField face_density(const ScalarField& phi, const ModelParams& p);

/// J = -rho_hat'(phi) m(phi) grad mu on faces, zero normal component on walls.
FaceField relative_flux(const ScalarField& phi, const ScalarField& mu, const ModelParams& p);

/// (mu - beta'(phi) sigma)_f grad phi on faces.
FaceField capillary_force(const ScalarField& phi, const ScalarField& mu, const ScalarField& sigma,
                          const ModelParams& p);

/// -div(2 nu D v) on faces for the MAC velocity, with reflected ghosts at
/// no-slip walls. nu is given per cell. Entries on wall faces (and periodic
/// duplicates) are zero.
MacVelocity viscous_operator(const MacVelocity& v, const ScalarField& nu_cells);

/// Discrete int 2 nu(phi) |Dv|^2: cell normal strains plus node shear strains
/// (half weight on walls). Equals <viscous_operator(v), v> hx hy.
double viscous_dissipation(const MacVelocity& v, const ScalarField& phi, const ModelParams& p);

/// Skew-symmetric centred convection (W . grad) u with face mass flux W.
/// <convection(W, u), u> = 0 exactly for every W.
MacVelocity convection(const FaceField& mass_flux, const MacVelocity& u);

/// 1/2 sum_c rho_hat(phi_c) |v|^2_c hx hy with |v|^2 interpolated to centres
/// as the average of the squared face values.
double kinetic_energy(const MacVelocity& v, const ScalarField& phi, const ModelParams& p);

/// Pressure whose gradient balances the force in the 1/rho-weighted sense:
/// div((F - grad p)/rho) = 0. Used to start the incremental projection from
/// a well-balanced state.
ScalarField balanced_pressure(const ScalarField& phi, const ScalarField& mu, const ScalarField& sigma,
                              const ModelParams& p, const SolveControls& controls = {});

/// Discrete divergence of a MAC velocity (walls read as zero flux).
ScalarField velocity_divergence(const MacVelocity& v);

/// Variable-density momentum step in convective form
///   (rho^{n+1} u - sqrt(rho^{n+1} rho^n) v^n)/dt + N(W; v^n) - div(2 nu D u) + grad p^n = F
/// (W = rho v^n + J), followed by the incremental projection
///   -div(grad q / rho^{n+1}) = -div u / dt,  v^{n+1} = u - dt grad q / rho^{n+1},  p += q.
class NsSolver {
 public:
  NsSolver(const Grid& grid, ModelParams params, SolveControls controls = {});

  NsStepOutput step(const NsStepInput& in);

  /// safety * h / max face speed of (rho v + J)/rho; +infinity at rest.
  double cfl(const MacVelocity& v, const ScalarField& phi, const ScalarField& mu, double safety = 0.4) const;

 private:
  Grid grid_;
  ModelParams params_;
  SolveControls controls_;
  FluxPoisson poisson_;
};

NsStepOutput ns_step(const NsStepInput& in, const ModelParams& p, const SolveControls& controls = {});
double cfl_ns(const MacVelocity& v, const ScalarField& phi, const ScalarField& mu, const ModelParams& p,
              double safety = 0.4);

}  // namespace nschc
