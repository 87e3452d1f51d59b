#include "nschc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nschc/kernels.hpp"

namespace nschc {

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::neumann_noslip:
      return "neumann_noslip";
    case BoundaryMode::periodic:
      return "periodic";
  }
  return "unknown";
}

BoundaryMode boundary_mode_from_string(std::string_view name) {
  if (name == "neumann_noslip") return BoundaryMode::neumann_noslip;
  if (name == "periodic") return BoundaryMode::periodic;
  throw std::invalid_argument("unknown boundary mode '" + std::string(name) + "'");
}

Grid Grid::make(int nx, int ny, double lx, double ly, BoundaryMode bc) {
  if (nx < 4 || ny < 4) throw std::invalid_argument("grid needs nx, ny >= 4");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw std::invalid_argument("grid lengths must be positive and finite");
  }
  Grid g{nx, ny, lx, ly, bc};
  if (!(g.hx() > 0.0) || !(g.hy() > 0.0) || !std::isfinite(g.hx()) || !std::isfinite(g.hy())) {
    throw std::invalid_argument("grid spacing is not finite and positive");
  }
  return g;
}

void ScalarField::fill(double value) { std::fill(values_.begin(), values_.end(), value); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void FaceField::sync_periodic() {
  if (!grid_.periodic()) return;
  for (int j = 0; j < grid_.ny; ++j) x(grid_.nx, j) = x(0, j);
  for (int i = 0; i < grid_.nx; ++i) y(i, grid_.ny) = y(i, 0);
}

void FaceField::zero_boundary_normal() {
  if (grid_.periodic()) return;
  for (int j = 0; j < grid_.ny; ++j) {
    x(0, j) = 0.0;
    x(grid_.nx, j) = 0.0;
  }
  for (int i = 0; i < grid_.nx; ++i) {
    y(i, 0) = 0.0;
    y(i, grid_.ny) = 0.0;
  }
}

bool FaceField::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(x_.begin(), x_.end(), finite) && std::all_of(y_.begin(), y_.end(), finite);
}

double FaceField::max_abs() const {
  return std::max(kernels::max_abs(x_), kernels::max_abs(y_));
}

}  // namespace nschc
