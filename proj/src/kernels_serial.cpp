// Reference kernels: one cell at a time, boundary handling through explicit
// neighbour lookups. Slow but easy to audit.

#include <algorithm>
#include <cmath>
#include <optional>

#include "nschc/kernels.hpp"

namespace nschc::kernels::serial {

namespace {

// Index of the neighbour of cell (i, j) shifted by (di, dj), or nullopt if it
// lies outside a walled domain.
std::optional<std::size_t> neighbour(const Grid& g, int i, int j, int di, int dj) {
  int a = i + di;
  int b = j + dj;
  if (g.periodic()) {
    a = (a + g.nx) % g.nx;
    b = (b + g.ny) % g.ny;
  } else if (a < 0 || a >= g.nx || b < 0 || b >= g.ny) {
    return std::nullopt;
  }
  return g.cell(a, b);
}

}  // namespace

void gradient(const Grid& g, const double* f, double* gx, double* gy) {
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int right = g.periodic() ? i % g.nx : i;
      const auto lo = neighbour(g, right, j, -1, 0);
      const bool inside = g.periodic() || (i > 0 && i < g.nx);
      gx[g.xface(i, j)] = inside ? (f[g.cell(right, j)] - f[*lo]) / g.hx() : 0.0;
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int up = g.periodic() ? j % g.ny : j;
      const auto lo = neighbour(g, i, up, 0, -1);
      const bool inside = g.periodic() || (j > 0 && j < g.ny);
      gy[g.yface(i, j)] = inside ? (f[g.cell(i, up)] - f[*lo]) / g.hy() : 0.0;
    }
  }
}

void divergence(const Grid& g, const double* fx, const double* fy, double* out) {
  const bool per = g.periodic();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double w = (per || i > 0) ? fx[g.xface(i, j)] : 0.0;
      const double e = (per || i + 1 < g.nx) ? fx[g.xface(per ? (i + 1) % g.nx : i + 1, j)] : 0.0;
      const double s = (per || j > 0) ? fy[g.yface(i, j)] : 0.0;
      const double n = (per || j + 1 < g.ny) ? fy[g.yface(i, per ? (j + 1) % g.ny : j + 1)] : 0.0;
      out[g.cell(i, j)] = (e - w) / g.hx() + (n - s) / g.hy();
    }
  }
}

void laplacian(const Grid& g, const double* f, double* out) {
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = f[g.cell(i, j)];
      const auto e = neighbour(g, i, j, 1, 0);
      const auto w = neighbour(g, i, j, -1, 0);
      const auto n = neighbour(g, i, j, 0, 1);
      const auto s = neighbour(g, i, j, 0, -1);
      const double ge = e ? (f[*e] - c) / g.hx() : 0.0;
      const double gw = w ? (c - f[*w]) / g.hx() : 0.0;
      const double gn = n ? (f[*n] - c) / g.hy() : 0.0;
      const double gs = s ? (c - f[*s]) / g.hy() : 0.0;
      out[g.cell(i, j)] = (ge - gw) / g.hx() + (gn - gs) / g.hy();
    }
  }
}

void flux_apply(const Grid& g, const double* cx, const double* cy, const double* u,
                double* out) {
  const bool per = g.periodic();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = u[g.cell(i, j)];
      const auto e = neighbour(g, i, j, 1, 0);
      const auto w = neighbour(g, i, j, -1, 0);
      const auto n = neighbour(g, i, j, 0, 1);
      const auto s = neighbour(g, i, j, 0, -1);
      const double ce = cx[g.xface(per ? (i + 1) % g.nx : i + 1, j)];
      const double cw = cx[g.xface(i, j)];
      const double cn = cy[g.yface(i, per ? (j + 1) % g.ny : j + 1)];
      const double cs = cy[g.yface(i, j)];
      const double fe = e ? ce * ((u[*e] - c) / g.hx()) : 0.0;
      const double fw = w ? cw * ((c - u[*w]) / g.hx()) : 0.0;
      const double fn = n ? cn * ((u[*n] - c) / g.hy()) : 0.0;
      const double fs = s ? cs * ((c - u[*s]) / g.hy()) : 0.0;
      out[g.cell(i, j)] = -((fe - fw) / g.hx() + (fn - fs) / g.hy());
    }
  }
}

double sum(std::span<const double> a) {
  double total = 0.0;
  for (std::size_t lo = 0; lo < a.size(); lo += kReductionBlock) {
    double s = 0.0;
    for (std::size_t k = lo; k < std::min(a.size(), lo + kReductionBlock); ++k) s += a[k];
    total += s;
  }
  return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t lo = 0; lo < a.size(); lo += kReductionBlock) {
    double s = 0.0;
    for (std::size_t k = lo; k < std::min(a.size(), lo + kReductionBlock); ++k) s += a[k] * b[k];
    total += s;
  }
  return total;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

}  // namespace nschc::kernels::serial
