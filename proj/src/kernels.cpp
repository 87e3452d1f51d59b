#include "nschc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nschc::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn block) {
  const auto nb = static_cast<std::ptrdiff_t>(block_count(n));
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    partial[static_cast<std::size_t>(b)] = block(lo, hi);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

void gradient(const Grid& g, const double* f, double* gx, double* gy) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* row = f + static_cast<std::size_t>(j) * nx;
    double* out = gx + static_cast<std::size_t>(j) * (nx + 1);
    for (int i = 1; i < nx; ++i) out[i] = (row[i] - row[i - 1]) / hx;
    if (per) {
      out[0] = (row[0] - row[nx - 1]) / hx;
      out[nx] = out[0];
    } else {
      out[0] = 0.0;
      out[nx] = 0.0;
    }
  }

#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j) {
    double* out = gy + static_cast<std::size_t>(j) * nx;
    if (j > 0 && j < ny) {
      const double* lo = f + static_cast<std::size_t>(j - 1) * nx;
      const double* hi = f + static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i) out[i] = (hi[i] - lo[i]) / hy;
    } else if (per) {
      const double* lo = f + static_cast<std::size_t>(ny - 1) * nx;
      const double* hi = f;
      for (int i = 0; i < nx; ++i) out[i] = (hi[i] - lo[i]) / hy;
    } else {
      for (int i = 0; i < nx; ++i) out[i] = 0.0;
    }
  }
}

void divergence(const Grid& g, const double* fx, const double* fy, double* out) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* xrow = fx + static_cast<std::size_t>(j) * (nx + 1);
    const double* ys = fy + static_cast<std::size_t>(j) * nx;
    const double* yn = fy + static_cast<std::size_t>(per && j + 1 == ny ? 0 : j + 1) * nx;
    const bool south_wall = !per && j == 0;
    const bool north_wall = !per && j + 1 == ny;
    double* o = out + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      double w = xrow[i];
      double e = xrow[per && i + 1 == nx ? 0 : i + 1];
      if (!per) {
        if (i == 0) w = 0.0;
        if (i + 1 == nx) e = 0.0;
      }
      const double s = south_wall ? 0.0 : ys[i];
      const double n = north_wall ? 0.0 : yn[i];
      o[i] = (e - w) / hx + (n - s) / hy;
    }
  }
}

void laplacian(const Grid& g, const double* f, double* out) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* c = f + static_cast<std::size_t>(j) * nx;
    const bool has_s = per || j > 0;
    const bool has_n = per || j + 1 < ny;
    const double* s = f + static_cast<std::size_t>(j > 0 ? j - 1 : ny - 1) * nx;
    const double* n = f + static_cast<std::size_t>(j + 1 < ny ? j + 1 : 0) * nx;
    double* o = out + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const int im = i > 0 ? i - 1 : nx - 1;
      const int ip = i + 1 < nx ? i + 1 : 0;
      const double ge = (per || i + 1 < nx) ? (c[ip] - c[i]) / hx : 0.0;
      const double gw = (per || i > 0) ? (c[i] - c[im]) / hx : 0.0;
      const double gn = has_n ? (n[i] - c[i]) / hy : 0.0;
      const double gs = has_s ? (c[i] - s[i]) / hy : 0.0;
      o[i] = (ge - gw) / hx + (gn - gs) / hy;
    }
  }
}

void flux_apply(const Grid& g, const double* cx, const double* cy, const double* u,
                double* out) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* c = u + static_cast<std::size_t>(j) * nx;
    const bool has_s = per || j > 0;
    const bool has_n = per || j + 1 < ny;
    const int jn = j + 1 < ny ? j + 1 : 0;
    const double* s = u + static_cast<std::size_t>(j > 0 ? j - 1 : ny - 1) * nx;
    const double* n = u + static_cast<std::size_t>(jn) * nx;
    const double* cxr = cx + static_cast<std::size_t>(j) * (nx + 1);
    const double* cys = cy + static_cast<std::size_t>(j) * nx;
    const double* cyn = cy + static_cast<std::size_t>(per ? jn : j + 1) * nx;
    double* o = out + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const int im = i > 0 ? i - 1 : nx - 1;
      const int ip = i + 1 < nx ? i + 1 : 0;
      const double fe = (per || i + 1 < nx) ? cxr[per ? ip : i + 1] * ((c[ip] - c[i]) / hx) : 0.0;
      const double fw = (per || i > 0) ? cxr[i] * ((c[i] - c[im]) / hx) : 0.0;
      const double fn = has_n ? cyn[i] * ((n[i] - c[i]) / hy) : 0.0;
      const double fs = has_s ? cys[i] * ((c[i] - s[i]) / hy) : 0.0;
      o[i] = -((fe - fw) / hx + (fn - fs) / hy);
    }
  }
}

double sum(std::span<const double> a) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += a[k];
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += a[k] * b[k];
    return s;
  });
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

double min_value(std::span<const double> a) {
  double m = std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(min : m) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::min(m, a[k]);
  return m;
}

double max_value(std::span<const double> a) {
  double m = -std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, a[k]);
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void xpay(std::span<const double> x, double beta, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] = x[k] + beta * y[k];
}

void add_scalar(double alpha, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] += alpha;
}

}  // namespace nschc::kernels
