#pragma once

#include "nschc/grid.hpp"

namespace nschc {

/// Centred two-point differences on faces.
FaceField gradient(const ScalarField& f);

/// Cell divergence of a face flux. In neumann_noslip mode any nonzero
/// boundary-face flux is rejected with std::invalid_argument.
ScalarField divergence_face_flux(const FaceField& flux);

/// Same as divergence_face_flux but without the boundary check; boundary
/// faces are read as zero flux in walled mode.
ScalarField divergence_unchecked(const FaceField& flux);

/// 5-point Laplacian, bitwise equal to divergence_face_flux(gradient(f)).
ScalarField laplacian(const ScalarField& f);

/// Midpoint quadrature sum(f) * hx * hy.
double integrate(const ScalarField& f);
double mean(const ScalarField& f);
double max_abs(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
double dot(const ScalarField& a, const ScalarField& b);

/// Arithmetic average of neighbouring cell values onto interior faces
/// (boundary faces get the adjacent cell value in walled mode).
FaceField face_average(const ScalarField& f);

/// Harmonic average 2ab/(a+b) onto faces; boundary faces are 0 in walled mode
/// since no flux crosses them.
FaceField face_harmonic_average(const ScalarField& f);

/// Weighted L2 norm squared of a face field: sum over faces of |F|^2 hx hy.
/// Periodic duplicates are counted once.
double face_norm_squared(const FaceField& f);

}  // namespace nschc
