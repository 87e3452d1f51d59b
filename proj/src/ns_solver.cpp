#include "nschc/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nschc/errors.hpp"
#include "nschc/operators.hpp"

namespace nschc {

namespace {

int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

// Nodal viscosity: mean of the (up to four) cells touching node (i, j).
std::vector<double> node_viscosity(const Grid& g, const double* nuc) {
  std::vector<double> out(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
  const bool per = g.periodic();
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      double s = 0.0;
      int count = 0;
      for (int dj = -1; dj <= 0; ++dj) {
        for (int di = -1; di <= 0; ++di) {
          int ci = i + di;
          int cj = j + dj;
          if (per) {
            ci = wrap(ci, g.nx);
            cj = wrap(cj, g.ny);
          } else if (ci < 0 || ci >= g.nx || cj < 0 || cj >= g.ny) {
            continue;
          }
          s += nuc[g.cell(ci, cj)];
          ++count;
        }
      }
      out[static_cast<std::size_t>(j) * (g.nx + 1) + i] = s / count;
    }
  }
  return out;
}

// Normal stresses 2 nu e_xx, 2 nu e_yy at cells and shear rate g at nodes.
struct Strain {
  std::vector<double> sxx, syy, exx, eyy, shear, tau;
};

Strain strain(const Grid& g, const double* nuc, const std::vector<double>& nun, const double* ux,
              const double* uy) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();
  Strain s;
  s.sxx.assign(g.cells(), 0.0);
  s.syy.assign(g.cells(), 0.0);
  s.exx.assign(g.cells(), 0.0);
  s.eyy.assign(g.cells(), 0.0);
  const std::size_t nodes = static_cast<std::size_t>(nx + 1) * (ny + 1);
  s.shear.assign(nodes, 0.0);
  s.tau.assign(nodes, 0.0);
  auto U = [&](int i, int j) { return ux[g.xface(i, j)]; };
  auto V = [&](int i, int j) { return uy[g.yface(i, j)]; };

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ie = per ? wrap(i + 1, nx) : i + 1;
      const int jn = per ? wrap(j + 1, ny) : j + 1;
      const std::size_t c = g.cell(i, j);
      s.exx[c] = (U(ie, j) - U(i, j)) / hx;
      s.eyy[c] = (V(i, jn) - V(i, j)) / hy;
      s.sxx[c] = 2.0 * nuc[c] * s.exx[c];
      s.syy[c] = 2.0 * nuc[c] * s.eyy[c];
    }
  }

  const int jmax = per ? ny - 1 : ny;
  const int imax = per ? nx - 1 : nx;
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= jmax; ++j) {
    for (int i = 0; i <= imax; ++i) {
      double dudy = 0.0;
      double dvdx = 0.0;
      if (per) {
        dudy = (U(i, j) - U(i, wrap(j - 1, ny))) / hy;
        dvdx = (V(i, j) - V(wrap(i - 1, nx), j)) / hx;
      } else {
        // Reflected ghosts u = -u across the walls.
        if (i > 0 && i < nx) {
          if (j == 0) dudy = 2.0 * U(i, 0) / hy;
          else if (j == ny) dudy = -2.0 * U(i, ny - 1) / hy;
          else dudy = (U(i, j) - U(i, j - 1)) / hy;
        }
        if (j > 0 && j < ny) {
          if (i == 0) dvdx = 2.0 * V(0, j) / hx;
          else if (i == nx) dvdx = -2.0 * V(nx - 1, j) / hx;
          else dvdx = (V(i, j) - V(i - 1, j)) / hx;
        }
      }
      const std::size_t n = static_cast<std::size_t>(j) * (nx + 1) + i;
      s.shear[n] = dudy + dvdx;
      s.tau[n] = nun[n] * s.shear[n];
    }
  }
  return s;
}

void viscous_apply(const Grid& g, const double* nuc, const std::vector<double>& nun, const double* ux,
                   const double* uy, double* ox, double* oy) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();
  const Strain s = strain(g, nuc, nun, ux, uy);
  auto tau = [&](int i, int j) { return s.tau[static_cast<std::size_t>(j) * (nx + 1) + i]; };

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double val = 0.0;
      if (per ? i < nx : (i > 0 && i < nx)) {
        const int iw = per ? wrap(i - 1, nx) : i - 1;
        const int jn = per ? wrap(j + 1, ny) : j + 1;
        val = -(s.sxx[g.cell(per ? i : i, j)] - s.sxx[g.cell(iw, j)]) / hx - (tau(i, jn) - tau(i, j)) / hy;
      }
      ox[g.xface(i, j)] = val;
    }
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double val = 0.0;
      if (per ? j < ny : (j > 0 && j < ny)) {
        const int js = per ? wrap(j - 1, ny) : j - 1;
        const int ie = per ? wrap(i + 1, nx) : i + 1;
        val = -(s.syy[g.cell(i, j)] - s.syy[g.cell(i, js)]) / hy - (tau(ie, j) - tau(i, j)) / hx;
      }
      oy[g.yface(i, j)] = val;
    }
  }
}

// Unknown faces: interior faces in walled mode, non-duplicate faces in
// periodic mode.
bool active_x(const Grid& g, int i) { return g.periodic() ? i < g.nx : (i > 0 && i < g.nx); }
bool active_y(const Grid& g, int j) { return g.periodic() ? j < g.ny : (j > 0 && j < g.ny); }

ScalarField nu_cells(const ScalarField& phi, const ModelParams& p) {
  ScalarField out(phi.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = nu(phi[k], p);
  return out;
}

}  // namespace

FaceField face_density(const ScalarField& phi, const ModelParams& p) {
  ScalarField r(phi.grid());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = rho_hat(phi[k], p);
  return face_average(r);
}

FaceField relative_flux(const ScalarField& phi, const ScalarField& mu, const ModelParams& p) {
  const Grid& g = phi.grid();
  ScalarField rp(g);
  ScalarField mob(g);
  for (std::size_t k = 0; k < rp.size(); ++k) {
    rp[k] = rho_hat_prime(phi[k], p);
    mob[k] = mobility(phi[k], p);
  }
  const FaceField rpf = face_average(rp);
  const FaceField mf = face_harmonic_average(mob);
  FaceField j = gradient(mu);
  for (std::size_t k = 0; k < j.xs().size(); ++k) j.xs()[k] = -rpf.xs()[k] * mf.xs()[k] * j.xs()[k];
  for (std::size_t k = 0; k < j.ys().size(); ++k) j.ys()[k] = -rpf.ys()[k] * mf.ys()[k] * j.ys()[k];
  if (p.rho1 == p.rho2) {
    std::fill(j.xs().begin(), j.xs().end(), 0.0);
    std::fill(j.ys().begin(), j.ys().end(), 0.0);
  }
  j.zero_boundary_normal();
  return j;
}

FaceField capillary_force(const ScalarField& phi, const ScalarField& mu, const ScalarField& sigma,
                          const ModelParams& p) {
  const Grid& g = phi.grid();
  ScalarField coef(g);
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = mu[k] - beta_prime(phi[k], p) * sigma[k];
  const FaceField cf = face_average(coef);
  FaceField f = gradient(phi);
  for (std::size_t k = 0; k < f.xs().size(); ++k) f.xs()[k] *= cf.xs()[k];
  for (std::size_t k = 0; k < f.ys().size(); ++k) f.ys()[k] *= cf.ys()[k];
  f.zero_boundary_normal();
  return f;
}

MacVelocity viscous_operator(const MacVelocity& v, const ScalarField& nu_c) {
  const Grid& g = v.grid();
  MacVelocity out(g);
  viscous_apply(g, nu_c.data(), node_viscosity(g, nu_c.data()), v.xs().data(), v.ys().data(), out.xs().data(),
                out.ys().data());
  return out;
}

double viscous_dissipation(const MacVelocity& v, const ScalarField& phi, const ModelParams& p) {
  const Grid& g = v.grid();
  const ScalarField nuc = nu_cells(phi, p);
  const auto nun = node_viscosity(g, nuc.data());
  const Strain s = strain(g, nuc.data(), nun, v.xs().data(), v.ys().data());
  double cells = 0.0;
  for (std::size_t c = 0; c < g.cells(); ++c) cells += s.sxx[c] * s.exx[c] + s.syy[c] * s.eyy[c];
  double nodes = 0.0;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      double w = 1.0;
      if (g.periodic()) {
        if (i == g.nx || j == g.ny) continue;
      } else {
        if (i == 0 || i == g.nx) w *= 0.5;
        if (j == 0 || j == g.ny) w *= 0.5;
      }
      const std::size_t n = static_cast<std::size_t>(j) * (g.nx + 1) + i;
      nodes += w * s.tau[n] * s.shear[n];
    }
  }
  return (cells + nodes) * g.cell_area();
}

MacVelocity convection(const FaceField& W, const MacVelocity& u) {
  const Grid& g = u.grid();
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = g.hx();
  const double hy = g.hy();
  const bool per = g.periodic();
  MacVelocity out(g);

  // x-momentum on x-faces: fluxes through cell centres (east/west) and nodes (north/south).
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!active_x(g, i)) continue;
      const int iw = per ? wrap(i - 1, nx) : i - 1;
      const int ie = per ? wrap(i + 1, nx) : i + 1;
      const double we = 0.5 * (W.x(i, j) + W.x(i + 1, j));
      const double ww = 0.5 * (W.x(iw, j) + W.x(i, j));
      double val = (we * u.x(ie, j) - ww * u.x(iw, j)) / (2.0 * hx);
      const bool has_n = per || j + 1 < ny;
      const bool has_s = per || j > 0;
      if (has_n) {
        const int jn = wrap(j + 1, ny);
        const double wn = 0.5 * (W.y(wrap(i - 1, nx), j + 1) + W.y(i, j + 1));
        val += wn * u.x(i, jn) / (2.0 * hy);
      }
      if (has_s) {
        const int js = wrap(j - 1, ny);
        const double ws = 0.5 * (W.y(wrap(i - 1, nx), j) + W.y(i, j));
        val -= ws * u.x(i, js) / (2.0 * hy);
      }
      out.x(i, j) = val;
    }
  }
  // y-momentum on y-faces.
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    if (!active_y(g, j)) continue;
    for (int i = 0; i < nx; ++i) {
      const int js = per ? wrap(j - 1, ny) : j - 1;
      const int jn = per ? wrap(j + 1, ny) : j + 1;
      const double wn = 0.5 * (W.y(i, j) + W.y(i, j + 1));
      const double ws = 0.5 * (W.y(i, js) + W.y(i, j));
      double val = (wn * u.y(i, jn) - ws * u.y(i, js)) / (2.0 * hy);
      const bool has_e = per || i + 1 < nx;
      const bool has_w = per || i > 0;
      if (has_e) {
        const double we = 0.5 * (W.x(i + 1, wrap(j - 1, ny)) + W.x(i + 1, j));
        val += we * u.y(wrap(i + 1, nx), j) / (2.0 * hx);
      }
      if (has_w) {
        const double ww = 0.5 * (W.x(i, wrap(j - 1, ny)) + W.x(i, j));
        val -= ww * u.y(wrap(i - 1, nx), j) / (2.0 * hx);
      }
      out.y(i, j) = val;
    }
  }
  out.sync_periodic();
  return out;
}

double kinetic_energy(const MacVelocity& v, const ScalarField& phi, const ModelParams& p) {
  const Grid& g = v.grid();
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double u2 = 0.5 * (v.x(i, j) * v.x(i, j) + v.x(i + 1, j) * v.x(i + 1, j));
      const double v2 = 0.5 * (v.y(i, j) * v.y(i, j) + v.y(i, j + 1) * v.y(i, j + 1));
      s += rho_hat(phi(i, j), p) * (u2 + v2);
    }
  }
  return 0.5 * s * g.cell_area();
}

ScalarField velocity_divergence(const MacVelocity& v) { return divergence_unchecked(v); }

namespace {

FaceField inverse(const FaceField& f) {
  FaceField out = f;
  for (double& x : out.xs()) x = x > 0.0 ? 1.0 / x : 0.0;
  for (double& x : out.ys()) x = x > 0.0 ? 1.0 / x : 0.0;
  return out;
}

ScalarField balanced_pressure_with(FluxPoisson& poisson, const FaceField& force, const FaceField& rho_f,
                                   const SolveControls& controls) {
  const Grid& g = force.grid();
  const FaceField inv = inverse(rho_f);
  FaceField scaled = force;
  for (std::size_t k = 0; k < scaled.xs().size(); ++k) scaled.xs()[k] *= inv.xs()[k];
  for (std::size_t k = 0; k < scaled.ys().size(); ++k) scaled.ys()[k] *= inv.ys()[k];
  ScalarField rhs = divergence_unchecked(scaled);
  for (double& x : rhs.values()) x = -x;
  ScalarField p(g);
  const SolveReport rep = poisson.solve(inv, rhs.values(), p.values(), controls);
  if (!rep.converged) throw SolverFailure("balanced pressure solve did not converge");
  return p;
}

}  // namespace

ScalarField balanced_pressure(const ScalarField& phi, const ScalarField& mu, const ScalarField& sigma,
                              const ModelParams& p, const SolveControls& controls) {
  FluxPoisson poisson(phi.grid());
  return balanced_pressure_with(poisson, capillary_force(phi, mu, sigma, p), face_density(phi, p), controls);
}

NsSolver::NsSolver(const Grid& grid, ModelParams params, SolveControls controls)
    : grid_(grid), params_(std::move(params)), controls_(controls), poisson_(grid) {}

double NsSolver::cfl(const MacVelocity& v, const ScalarField& phi, const ScalarField& mu, double safety) const {
  const FaceField rho = face_density(phi, params_);
  const FaceField J = relative_flux(phi, mu, params_);
  double speed = 0.0;
  for (std::size_t k = 0; k < v.xs().size(); ++k)
    speed = std::max(speed, std::abs(v.xs()[k]) + std::abs(J.xs()[k]) / rho.xs()[k]);
  for (std::size_t k = 0; k < v.ys().size(); ++k)
    speed = std::max(speed, std::abs(v.ys()[k]) + std::abs(J.ys()[k]) / rho.ys()[k]);
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return safety * std::min(grid_.hx(), grid_.hy()) / speed;
}

NsStepOutput NsSolver::step(const NsStepInput& in) {
  const Grid& g = grid_;
  const ModelParams& p = params_;
  const double dt = in.dt;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("NS step needs dt > 0");

  const FaceField rho = face_density(in.phi, p);
  const FaceField rho_old = in.phi_previous ? face_density(*in.phi_previous, p) : rho;
  const FaceField force = capillary_force(in.phi, in.mu, in.sigma, p);
  const FaceField J = relative_flux(in.phi, in.mu, p);

  NsStepOutput out;
  out.cfl_violated = dt > cfl(in.v, in.phi, in.mu, 1.0);
  out.pressure = in.pressure ? *in.pressure : balanced_pressure_with(poisson_, force, rho, controls_);

  FaceField W = J;
  for (std::size_t k = 0; k < W.xs().size(); ++k) W.xs()[k] += rho.xs()[k] * in.v.xs()[k];
  for (std::size_t k = 0; k < W.ys().size(); ++k) W.ys()[k] += rho.ys()[k] * in.v.ys()[k];
  W.sync_periodic();
  const MacVelocity conv = convection(W, in.v);
  const FaceField gp = gradient(out.pressure);

  const std::size_t nxf = g.x_faces();
  const std::size_t nyf = g.y_faces();
  std::vector<double> rhs(nxf + nyf, 0.0), diag(nxf + nyf, 1.0), x(nxf + nyf, 0.0);
  const ScalarField nuc = nu_cells(in.phi, p);
  const auto nun = node_viscosity(g, nuc.data());
  const double hx2 = g.hx() * g.hx();
  const double hy2 = g.hy() * g.hy();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (!active_x(g, i)) continue;
      const std::size_t f = g.xface(i, j);
      rhs[f] = std::sqrt(rho.xs()[f] * rho_old.xs()[f]) * in.v.xs()[f] / dt - conv.xs()[f] - gp.xs()[f] +
               force.xs()[f];
      x[f] = in.v.xs()[f];
      const int iw = wrap(i - 1, g.nx);
      const double nbot = nun[static_cast<std::size_t>(j) * (g.nx + 1) + i];
      const double ntop = nun[static_cast<std::size_t>(j + 1) * (g.nx + 1) + i];
      const double kb = (!g.periodic() && j == 0) ? 2.0 : 1.0;
      const double kt = (!g.periodic() && j + 1 == g.ny) ? 2.0 : 1.0;
      diag[f] = rho.xs()[f] / dt + 2.0 * (nuc(i % g.nx, j) + nuc(iw, j)) / hx2 + (kb * nbot + kt * ntop) / hy2;
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    if (!active_y(g, j)) continue;
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t f = g.yface(i, j);
      rhs[nxf + f] = std::sqrt(rho.ys()[f] * rho_old.ys()[f]) * in.v.ys()[f] / dt - conv.ys()[f] - gp.ys()[f] +
                     force.ys()[f];
      x[nxf + f] = in.v.ys()[f];
      const int js = wrap(j - 1, g.ny);
      const double nl = nun[static_cast<std::size_t>(j) * (g.nx + 1) + i];
      const double nr = nun[static_cast<std::size_t>(j) * (g.nx + 1) + i + 1];
      const double kl = (!g.periodic() && i == 0) ? 2.0 : 1.0;
      const double kr = (!g.periodic() && i + 1 == g.nx) ? 2.0 : 1.0;
      diag[nxf + f] =
          rho.ys()[f] / dt + 2.0 * (nuc(i, j % g.ny) + nuc(i, js)) / hy2 + (kl * nl + kr * nr) / hx2;
    }
  }

  auto apply = [&](std::span<const double> a, std::span<double> b) {
    viscous_apply(g, nuc.data(), nun, a.data(), a.data() + nxf, b.data(), b.data() + nxf);
    for (std::size_t k = 0; k < nxf; ++k) b[k] += rho.xs()[k] / dt * a[k];
    for (std::size_t k = 0; k < nyf; ++k) b[nxf + k] += rho.ys()[k] / dt * a[nxf + k];
    // Inactive slots (walls, periodic duplicates) stay decoupled.
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (!active_x(g, i)) b[g.xface(i, j)] = 0.0;
    for (int j = 0; j <= g.ny; ++j)
      if (!active_y(g, j))
        for (int i = 0; i < g.nx; ++i) b[nxf + g.yface(i, j)] = 0.0;
  };
  auto precond = [&](std::span<const double> a, std::span<double> b) {
    for (std::size_t k = 0; k < a.size(); ++k) b[k] = a[k] / diag[k];
  };
  auto inner = [](std::span<const double> a, std::span<const double> b) { return kernels::dot(a, b); };
  out.momentum_report = pcg(apply, precond, inner, rhs, x, controls_);
  if (!out.momentum_report.converged) {
    throw SolverFailure("momentum solve did not converge (residual " +
                        std::to_string(out.momentum_report.residual) + ")");
  }

  MacVelocity u(g);
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nxf), u.xs().begin());
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(nxf), x.end(), u.ys().begin());
  u.zero_boundary_normal();
  u.sync_periodic();

  // Projection.
  const FaceField inv = inverse(rho);
  ScalarField prhs = divergence_unchecked(u);
  for (double& val : prhs.values()) val = -val / dt;
  ScalarField q(g);
  out.pressure_report = poisson_.solve(inv, prhs.values(), q.values(), controls_);
  if (!out.pressure_report.converged) {
    throw SolverFailure("pressure solve did not converge (residual " +
                        std::to_string(out.pressure_report.residual) + ")");
  }
  const FaceField gq = gradient(q);
  for (std::size_t k = 0; k < nxf; ++k) u.xs()[k] -= dt * gq.xs()[k] * inv.xs()[k];
  for (std::size_t k = 0; k < nyf; ++k) u.ys()[k] -= dt * gq.ys()[k] * inv.ys()[k];
  u.zero_boundary_normal();
  u.sync_periodic();
  if (!u.all_finite()) throw SolverFailure("momentum step produced non-finite velocity");

  for (std::size_t k = 0; k < q.size(); ++k) out.pressure[k] += q[k];
  remove_mean(out.pressure.values());
  out.v = std::move(u);
  out.kinetic_energy = kinetic_energy(out.v, in.phi, p);
  return out;
}

NsStepOutput ns_step(const NsStepInput& in, const ModelParams& p, const SolveControls& controls) {
  NsSolver solver(in.phi.grid(), p, controls);
  return solver.step(in);
}

double cfl_ns(const MacVelocity& v, const ScalarField& phi, const ScalarField& mu, const ModelParams& p,
              double safety) {
  return NsSolver(phi.grid(), p).cfl(v, phi, mu, safety);
}

}  // namespace nschc
