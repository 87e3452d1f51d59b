#include "nschc/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nschc/initial.hpp"
#include "nschc/kernels.hpp"
#include "nschc/ns_solver.hpp"
#include "nschc/operators.hpp"
#include "nschc/output.hpp"
#include "nschc/version.hpp"

namespace nschc {

namespace fs = std::filesystem;

ExitCode classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::config_error;
  if (dynamic_cast<const InvariantViolation*>(&e)) return ExitCode::invariant_violation;
  if (dynamic_cast<const SolverFailure*>(&e) || dynamic_cast<const SolvabilityError*>(&e))
    return ExitCode::solver_failure;
  return ExitCode::io_error;
}

std::string describe(const ConfigError& e) {
  std::ostringstream o;
  for (const auto& i : e.issues()) {
    if (i.line > 0) o << "line " << i.line << ": ";
    if (!i.field.empty()) o << i.field << ": ";
    o << i.message << '\n';
  }
  return o.str();
}

RunConfig apply_overrides(RunConfig c, const RunOverrides& o) {
  if (o.out_dir) c.output.directory = *o.out_dir;
  if (o.seed) c.ic.seed = *o.seed;
  validate_config(c);
  return c;
}

SimControls sim_controls(const RunConfig& c) {
  SimControls s;
  s.dt_max = c.time.dt;
  s.cfl_safety = c.time.cfl_safety;
  s.adaptive = c.time.adaptive;
  s.solve = c.solver;
  return s;
}

namespace {

std::string snapshot_name(long step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%08ld.vtk", step);
  return buf;
}

void write_manifest(const fs::path& dir, const RunConfig& c, const RunSummary& s, double stabilization,
                    const std::string& status) {
  nlohmann::json j;
  j["run_id"] = s.run_id;
  j["version"] = kVersion;
  j["status"] = status;
  j["config_hash"] = config_hash(c);
  j["config"] = serialize_config(c);
  j["eps_reg"] = c.params.eps_reg;
  j["stabilization"] = stabilization;
  j["steps"] = s.steps;
  j["t_final"] = s.t;
  j["files"] = s.files;
  const fs::path path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("I/O error on '" + path.string() + "': cannot open for writing");
  out << j.dump(2) << '\n';
}

}  // namespace

RunSummary run_simulation(const RunConfig& c, std::optional<long> max_steps, std::ostream& log) {
  const fs::path dir = c.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("I/O error on '" + dir.string() + "': " + ec.message());

  RunSummary summary;
  summary.run_id = config_hash(c) + "-" + std::to_string(c.ic.seed);
  Simulation sim(initial_state(c), c.params, sim_controls(c));

  std::optional<TimeseriesWriter> csv;
  if (c.wants("csv")) {
    csv.emplace(dir / "timeseries.csv");
    summary.files.push_back("timeseries.csv");
    csv->append(sim.history().front());
  }
  const bool vtk = c.wants("vtk") && c.time.output_every > 0;
  auto snapshot = [&](const SimState& s) {
    const std::string name = snapshot_name(s.step);
    write_vtk(dir / name, s);
    summary.files.push_back(name);
  };
  if (vtk) snapshot(sim.state());

  log << "run " << summary.run_id << ": " << c.grid.nx << "x" << c.grid.ny << ", t_end=" << c.time.t_end
      << ", S=" << sim.stabilization() << '\n';
  try {
    sim.run(c.time.t_end, max_steps, [&](const Simulation& s, const DiagnosticsRecord& r) {
      if (csv) csv->append(r);
      if (vtk && r.step % c.time.output_every == 0) snapshot(s.state());
    });
  } catch (const std::exception& e) {
    summary.steps = sim.state().step;
    summary.t = sim.state().t;
    write_manifest(dir, c, summary, sim.stabilization(), std::string("failed: ") + e.what());
    throw;
  }
  summary.steps = sim.state().step;
  summary.t = sim.state().t;
  if (vtk && summary.steps % c.time.output_every != 0) snapshot(sim.state());
  summary.files.push_back("manifest.json");
  write_manifest(dir, c, summary, sim.stabilization(), "ok");

  const DiagnosticsRecord& last = sim.history().back();
  log << "done: " << summary.steps << " steps, t=" << summary.t << ", E=" << last.E_total
      << ", residual=" << last.energy_residual << ", clamps=" << sim.state().clamp_events
      << ", cfl warnings=" << sim.state().cfl_warnings << '\n';
  return summary;
}

namespace {

CheckResult result(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

ScalarField random_field(const Grid& g, std::uint64_t seed) {
  ScalarField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 2.0 * counter_uniform(seed, k) - 1.0;
  return f;
}

}  // namespace

std::vector<CheckResult> run_checks(const RunConfig& c, long steps) {
  std::vector<CheckResult> out;
  const Grid g = c.make_grid();

  const ValidationReport rep = validate_hypotheses(c.params, c.ic.phi_mean);
  {
    std::string detail;
    for (const auto& h : rep.checks)
      if (h.status == CheckStatus::unverifiable) detail += h.id + " unverifiable; ";
    out.push_back(result("hypotheses", rep.ok(), detail.empty() ? "all satisfied" : detail));
  }

  const ScalarField f = random_field(g, 11);
  {
    const ScalarField a = laplacian(f);
    const ScalarField b = divergence_face_flux(gradient(f));
    out.push_back(result("laplacian equals div(grad)", a.storage() == b.storage(), "bitwise comparison"));
  }
  {
    FaceField flux(g);
    for (std::size_t k = 0; k < flux.xs().size(); ++k) flux.xs()[k] = 2.0 * counter_uniform(12, k) - 1.0;
    for (std::size_t k = 0; k < flux.ys().size(); ++k) flux.ys()[k] = 2.0 * counter_uniform(13, k) - 1.0;
    flux.sync_periodic();
    flux.zero_boundary_normal();
    const double s = integrate(divergence_face_flux(flux));
    const double scale = g.lx + g.ly;
    out.push_back(result("discrete divergence theorem", std::abs(s) <= 1e-12 * scale, "integral " + num(s)));
  }
  {
    std::vector<double> par(g.cells()), ser(g.cells());
    kernels::laplacian(g, f.data(), par.data());
    kernels::serial::laplacian(g, f.data(), ser.data());
    const bool same_sum = kernels::sum(f.values()) == kernels::serial::sum(f.values());
    out.push_back(result("parallel kernels match serial", par == ser && same_sum, "laplacian and sum, bitwise"));
  }
  {
    ScalarField rhs = random_field(g, 14);
    remove_mean(rhs.values());
    const EllipticSolution sol = neumann_solve(rhs, c.solver);
    out.push_back(result("poisson solve", sol.report.converged,
                         std::to_string(sol.report.iterations) + " iterations, residual " + num(sol.report.residual)));
  }

  // short run of the configured problem
  try {
    Simulation sim(initial_state(c), c.params, sim_controls(c));
    const DiagnosticsRecord first = sim.history().front();
    sim.run(c.time.t_end, steps);
    const auto& h = sim.history();
    const DiagnosticsRecord& last = h.back();
    const double dphi = std::abs(last.mass_phi - first.mass_phi);
    const double dsig = std::abs(last.mass_sigma - first.mass_sigma);
    out.push_back(result("phi mass conserved", dphi <= 1e-10 * std::max(1.0, g.area()), "drift " + num(dphi)));
    out.push_back(result("sigma mass conserved", dsig <= 1e-10 * std::max(1.0, std::abs(first.mass_sigma)),
                         "drift " + num(dsig)));
    double min_sigma = std::numeric_limits<double>::infinity();
    double worst_rise = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < h.size(); ++k) {
      min_sigma = std::min(min_sigma, h[k].min_sigma);
      if (k) worst_rise = std::max(worst_rise, h[k].E_total - h[k - 1].E_total);
    }
    out.push_back(result("sigma nonnegative", min_sigma >= 0.0 && sim.state().clamp_events == 0,
                         "min " + num(min_sigma) + ", clamps " + std::to_string(sim.state().clamp_events)));
    const double etol = 1e-8 * (1.0 + std::abs(first.E_total));
    out.push_back(result("energy non-increasing", h.size() < 2 || worst_rise <= etol,
                         "largest one-step change " + num(h.size() < 2 ? 0.0 : worst_rise)));
    const double div = max_abs(velocity_divergence(sim.state().v));
    const double vscale = std::max(1.0, sim.state().v.max_abs()) / std::min(g.hx(), g.hy());
    out.push_back(result("velocity divergence-free", div <= 1e-8 * vscale, "max |div v| " + num(div)));
    out.push_back(result("short run", true, std::to_string(sim.state().step) + " steps to t=" + num(sim.state().t)));
  } catch (const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    out.push_back(result("short run", false, e.what()));
  }
  return out;
}

namespace {

struct Final {
  ScalarField phi;
  ScalarField sigma;
};

Final solve_to_end(RunConfig c, int nx, int ny, double dt, std::optional<long> max_steps) {
  c.grid.nx = nx;
  c.grid.ny = ny;
  c.time.dt = dt;
  c.time.adaptive = false;
  Simulation sim(initial_state(c), c.params, sim_controls(c));
  sim.run(c.time.t_end, max_steps);
  return {sim.state().phi, sim.state().sigma};
}

ScalarField restrict2(const ScalarField& fine) {
  const Grid& gf = fine.grid();
  const Grid gc = Grid::make(gf.nx / 2, gf.ny / 2, gf.lx, gf.ly, gf.bc);
  ScalarField out(gc);
  for (int j = 0; j < gc.ny; ++j)
    for (int i = 0; i < gc.nx; ++i)
      out(i, j) = 0.25 * (fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j) + fine(2 * i, 2 * j + 1) +
                          fine(2 * i + 1, 2 * j + 1));
  return out;
}

double l2_diff(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s * a.grid().cell_area());
}

OrderEstimate estimate(std::string field, double d1, double d2, double ratio) {
  OrderEstimate e{std::move(field), {d1, d2}, std::numeric_limits<double>::quiet_NaN()};
  if (d1 > 1e-13 && d2 > 1e-14) e.order = std::log(d1 / d2) / std::log(ratio);
  return e;
}

}  // namespace

ConvergenceReport convergence_study(const RunConfig& c, std::optional<long> max_steps) {
  if (c.grid.nx % 4 != 0 || c.grid.ny % 4 != 0 || c.grid.nx < 16 || c.grid.ny < 16) {
    throw ConfigError({{0, "grid", "convergence study needs nx, ny divisible by 4 and at least 16"}});
  }
  ConvergenceReport r;
  const double dt = c.time.dt;
  const int nx = c.grid.nx;
  const int ny = c.grid.ny;
  r.resolutions = {nx / 4, nx / 2, nx};
  std::vector<Final> s;
  for (int k = 0; k < 3; ++k) s.push_back(solve_to_end(c, nx >> (2 - k), ny >> (2 - k), dt, max_steps));
  r.spatial.push_back(estimate("phi", l2_diff(s[0].phi, restrict2(s[1].phi)), l2_diff(s[1].phi, restrict2(s[2].phi)), 2.0));
  r.spatial.push_back(estimate("sigma", l2_diff(s[0].sigma, restrict2(s[1].sigma)),
                               l2_diff(s[1].sigma, restrict2(s[2].sigma)), 2.0));

  r.time_steps = {dt, dt / 2, dt / 4};
  std::vector<Final> t;
  for (int k = 0; k < 3; ++k) {
    std::optional<long> cap;
    if (max_steps) cap = *max_steps << k;
    t.push_back(solve_to_end(c, nx / 4, ny / 4, r.time_steps[k], cap));
  }
  r.temporal.push_back(estimate("phi", l2_diff(t[0].phi, t[1].phi), l2_diff(t[1].phi, t[2].phi), 2.0));
  r.temporal.push_back(estimate("sigma", l2_diff(t[0].sigma, t[1].sigma), l2_diff(t[1].sigma, t[2].sigma), 2.0));
  return r;
}

}  // namespace nschc
