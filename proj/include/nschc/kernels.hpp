#pragma once

// Low-level stencil and vector kernels on raw grid arrays.
//
// `nschc::kernels` holds the OpenMP row-parallel versions used by the
// solvers; `nschc::kernels::serial` holds plain reference loops kept for
// testing and benchmarking. Both produce bitwise identical results: stencils
// use the same arithmetic, and reductions sum fixed-size blocks in order, so
// nothing depends on the thread count.

#include <cstddef>
#include <span>

#include "nschc/grid.hpp"

namespace nschc::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

// Face gradient: gx has grid.x_faces() entries, gy has grid.y_faces().
// Boundary faces are 0 in neumann_noslip mode, wrapped in periodic mode.
void gradient(const Grid& g, const double* f, double* gx, double* gy);

// Cell divergence of face fluxes. In neumann_noslip mode boundary faces are
// treated as zero flux regardless of their stored value.
void divergence(const Grid& g, const double* fx, const double* fy, double* out);

// 5-point Laplacian; bitwise equal to divergence(gradient(f)).
void laplacian(const Grid& g, const double* f, double* out);

// out = -div(c grad u) with face coefficients cx (x-faces) and cy (y-faces).
void flux_apply(const Grid& g, const double* cx, const double* cy, const double* u,
                double* out);

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double min_value(std::span<const double> a);
double max_value(std::span<const double> a);

void axpy(double alpha, std::span<const double> x, std::span<double> y);  // y += a x
void xpay(std::span<const double> x, double beta, std::span<double> y);   // y = x + b y
void add_scalar(double alpha, std::span<double> y);                       // y += a

namespace serial {

void gradient(const Grid& g, const double* f, double* gx, double* gy);
void divergence(const Grid& g, const double* fx, const double* fy, double* out);
void laplacian(const Grid& g, const double* f, double* out);
void flux_apply(const Grid& g, const double* cx, const double* cy, const double* u,
                double* out);
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace serial

}  // namespace nschc::kernels
