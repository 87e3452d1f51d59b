#include "nschc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

namespace nschc {

namespace {
// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double laplacian_eigenvalue(int k, int n, double h, bool periodic) {
  const double s = std::sin(std::numbers::pi * k / (periodic ? n : 2.0 * n));
  return 4.0 / (h * h) * s * s;
}

struct SpectralInverse::Impl {
  Grid grid;
  bool periodic = false;
  int modes_x = 0;  // nx for cosine transforms, nx/2 + 1 for r2c
  double* real = nullptr;
  fftw_complex* spec = nullptr;  // periodic only
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> multiplier;  // per mode, transform normalisation folded in

  explicit Impl(const Grid& g) : grid(g), periodic(g.periodic()) {
    const std::size_t n = g.cells();
    real = fftw_alloc_real(n);
    std::lock_guard lock(planner_mutex());
    if (periodic) {
      modes_x = g.nx / 2 + 1;
      spec = fftw_alloc_complex(static_cast<std::size_t>(g.ny) * modes_x);
      forward = fftw_plan_dft_r2c_2d(g.ny, g.nx, real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_2d(g.ny, g.nx, spec, real, FFTW_ESTIMATE);
    } else {
      modes_x = g.nx;
      forward = fftw_plan_r2r_2d(g.ny, g.nx, real, real, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
      backward = fftw_plan_r2r_2d(g.ny, g.nx, real, real, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    if (spec) fftw_free(spec);
  }

  void set_symbol(const std::function<double(double)>& symbol) {
    const double norm = periodic ? 1.0 / static_cast<double>(grid.cells())
                                 : 1.0 / (4.0 * static_cast<double>(grid.cells()));
    multiplier.assign(static_cast<std::size_t>(grid.ny) * modes_x, 0.0);
    for (int ky = 0; ky < grid.ny; ++ky) {
      const double ly = laplacian_eigenvalue(ky, grid.ny, grid.hy(), periodic);
      for (int kx = 0; kx < modes_x; ++kx) {
        const double lx = laplacian_eigenvalue(kx, grid.nx, grid.hx(), periodic);
        multiplier[static_cast<std::size_t>(ky) * modes_x + kx] = symbol(lx + ly) * norm;
      }
    }
  }
};

SpectralInverse::SpectralInverse(const Grid& grid, const std::function<double(double)>& symbol)
    : impl_(std::make_unique<Impl>(grid)) {
  impl_->set_symbol(symbol);
}

SpectralInverse::~SpectralInverse() = default;
SpectralInverse::SpectralInverse(SpectralInverse&&) noexcept = default;
SpectralInverse& SpectralInverse::operator=(SpectralInverse&&) noexcept = default;

const Grid& SpectralInverse::grid() const { return impl_->grid; }

void SpectralInverse::reset(const std::function<double(double)>& symbol) { impl_->set_symbol(symbol); }

void SpectralInverse::apply(std::span<const double> in, std::span<double> out) const {
  Impl& s = *impl_;
  const std::size_t n = s.grid.cells();
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n), s.real);
  if (s.periodic) {
    fftw_execute_dft_r2c(s.forward, s.real, s.spec);
    for (std::size_t k = 0; k < s.multiplier.size(); ++k) {
      s.spec[k][0] *= s.multiplier[k];
      s.spec[k][1] *= s.multiplier[k];
    }
    fftw_execute_dft_c2r(s.backward, s.spec, s.real);
  } else {
    fftw_execute_r2r(s.forward, s.real, s.real);
    for (std::size_t k = 0; k < n; ++k) s.real[k] *= s.multiplier[k];
    fftw_execute_r2r(s.backward, s.real, s.real);
  }
  std::copy(s.real, s.real + n, out.begin());
}

}  // namespace nschc
