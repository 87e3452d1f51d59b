#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nschc {

enum class BoundaryMode {
  neumann_noslip,  // zero normal derivative for scalars, v = 0 on the walls
  periodic,        // verification only
};

std::string_view to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(std::string_view name);

/// Uniform rectangular grid with cell-centred scalars and MAC-staggered faces.
///
/// Cell (i, j) has centre ((i + 1/2) hx, (j + 1/2) hy). x-faces are indexed
/// i = 0..nx (face i sits between cells i-1 and i), y-faces j = 0..ny.
/// In periodic mode face nx duplicates face 0 (likewise for y).
struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;
  BoundaryMode bc = BoundaryMode::neumann_noslip;

  /// Validating constructor; throws std::invalid_argument.
  static Grid make(int nx, int ny, double lx, double ly,
                   BoundaryMode bc = BoundaryMode::neumann_noslip);

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double cell_area() const { return hx() * hy(); }
  double area() const { return lx * ly; }
  bool periodic() const { return bc == BoundaryMode::periodic; }

  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t x_faces() const { return static_cast<std::size_t>(nx + 1) * ny; }
  std::size_t y_faces() const { return static_cast<std::size_t>(nx) * (ny + 1); }

  std::size_t cell(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  std::size_t xface(int i, int j) const { return static_cast<std::size_t>(j) * (nx + 1) + i; }
  std::size_t yface(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

  double xc(int i) const { return (i + 0.5) * hx(); }
  double yc(int j) const { return (j + 0.5) * hy(); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Cell-centred field (phi, mu, sigma, pressure).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0)
      : grid_(grid), values_(grid.cells(), value) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[grid_.cell(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.cell(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& storage() { return values_; }
  const std::vector<double>& storage() const { return values_; }

  void fill(double value);
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Face-centred vector pair: x-components on x-faces, y-components on y-faces.
/// Used for gradients, fluxes, forces and the MAC velocity.
class FaceField {
 public:
  FaceField() = default;
  explicit FaceField(const Grid& grid, double value = 0.0)
      : grid_(grid), x_(grid.x_faces(), value), y_(grid.y_faces(), value) {}

  const Grid& grid() const { return grid_; }

  double& x(int i, int j) { return x_[grid_.xface(i, j)]; }
  double x(int i, int j) const { return x_[grid_.xface(i, j)]; }
  double& y(int i, int j) { return y_[grid_.yface(i, j)]; }
  double y(int i, int j) const { return y_[grid_.yface(i, j)]; }

  std::vector<double>& xs() { return x_; }
  const std::vector<double>& xs() const { return x_; }
  std::vector<double>& ys() { return y_; }
  const std::vector<double>& ys() const { return y_; }

  /// Copies face 0 onto face nx (and 0 onto ny) in periodic mode.
  void sync_periodic();
  /// Zeroes boundary-normal components in neumann_noslip mode.
  void zero_boundary_normal();
  bool all_finite() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> x_;
  std::vector<double> y_;
};

using MacVelocity = FaceField;

}  // namespace nschc
