#pragma once

#include <functional>
#include <memory>
#include <span>

#include "nschc/grid.hpp"

namespace nschc {

/// Applies a function of the constant-coefficient 5-point Laplacian,
/// u = g(-Delta_h) f, by diagonalising -Delta_h with FFTW: cosine transforms
/// (DCT-II / DCT-III) in neumann_noslip mode, real FFTs in periodic mode.
///
/// `symbol(lambda)` gives the multiplier for the eigenvalue lambda >= 0 of
/// -Delta_h; for singular operators it should return 0 at lambda = 0.
/// Each instance owns its transform buffers, so one instance must not be
/// applied from two threads at once.
class SpectralInverse {
 public:
  SpectralInverse(const Grid& grid, const std::function<double(double)>& symbol);
  ~SpectralInverse();
  SpectralInverse(SpectralInverse&&) noexcept;
  SpectralInverse& operator=(SpectralInverse&&) noexcept;
  SpectralInverse(const SpectralInverse&) = delete;
  SpectralInverse& operator=(const SpectralInverse&) = delete;

  const Grid& grid() const;

  /// out = g(-Delta_h) in; in and out may alias.
  void apply(std::span<const double> in, std::span<double> out) const;

  /// Replaces the symbol without replanning.
  void reset(const std::function<double(double)>& symbol);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Eigenvalues of -Delta_h along one axis: (4/h^2) sin^2(pi k / 2n) for
/// Neumann, (4/h^2) sin^2(pi k / n) for periodic.
double laplacian_eigenvalue(int k, int n, double h, bool periodic);

}  // namespace nschc
