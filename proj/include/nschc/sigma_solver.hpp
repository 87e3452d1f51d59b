#pragma once

#include <memory>

#include "nschc/coeffs.hpp"
#include "nschc/elliptic.hpp"
#include "nschc/grid.hpp"

namespace nschc {

struct SigmaStepInput {
  const ScalarField& sigma;  // nonnegative
  const MacVelocity& v;      // discretely divergence-free
  const ScalarField& phi;
  double dt = 0.0;
};

struct SigmaStepOutput {
  ScalarField sigma;
  int clamp_events = 0;     // cells where a rounding-level negative was clipped
  double mass_drift = 0.0;  // |int sigma^{n+1} - int sigma^n|
  bool cfl_violated = false;
  SolveReport report;
};

/// Chemical density step: explicit first-order upwind transport with the
/// drift v - beta'(phi) grad phi, then backward-Euler diffusion. Throws
/// PositivityError on negative input or on a negative beyond -1e-13 after
/// the step, SolverFailure if the diffusion solve does not converge.
class SigmaSolver {
 public:
  SigmaSolver(const Grid& grid, ModelParams params, SolveControls controls = {});

  SigmaStepOutput step(const SigmaStepInput& in);

  /// Largest dt for which the explicit transport keeps sigma nonnegative,
  /// scaled by `safety`; +infinity when nothing is transported.
  double cfl(const MacVelocity& v, const ScalarField& phi, double safety = 0.4) const;

  /// Face drift v - beta'(phi)_f grad phi (zero on walls).
  FaceField drift(const MacVelocity& v, const ScalarField& phi) const;

 private:
  Grid grid_;
  ModelParams params_;
  SolveControls controls_;
  std::unique_ptr<SpectralInverse> heat_;  // exact inverse of I - dt Delta for cached dt
  double heat_dt_ = -1.0;
};

SigmaStepOutput sigma_step(const SigmaStepInput& in, const ModelParams& p,
                           const SolveControls& controls = {});
double cfl_sigma(const MacVelocity& v, const ScalarField& phi, const ModelParams& p,
                 double safety = 0.4);

/// int sigma (ln sigma - 1), with 0 ln 0 = 0 (values below 1e-300 count as 0).
double entropy(const ScalarField& sigma);

double sigma_sup_norm(const ScalarField& sigma);

}  // namespace nschc
