#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nschc/config.hpp"
#include "nschc/coupled.hpp"
#include "nschc/errors.hpp"

namespace nschc {

/// Process exit codes of the command-line tool.
enum class ExitCode : int {
  ok = 0,
  io_error = 1,
  config_error = 2,
  invariant_violation = 3,
  solver_failure = 4,
};

ExitCode classify(const std::exception& e);

/// One "line N: field: message" entry per issue.
std::string describe(const ConfigError& e);

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<long> max_steps;
};

/// Applies command-line overrides and revalidates.
RunConfig apply_overrides(RunConfig c, const RunOverrides& o);

SimControls sim_controls(const RunConfig& c);

struct RunSummary {
  std::string run_id;
  long steps = 0;
  double t = 0.0;
  std::vector<std::string> files;  // relative to the output directory
};

/// Runs the configured simulation, streaming the time series and VTK
/// snapshots into the output directory and finishing with manifest.json.
/// On failure the manifest records the error and the exception propagates.
RunSummary run_simulation(const RunConfig& c, std::optional<long> max_steps, std::ostream& log);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Operator self-checks on the configured grid plus a short run of the
/// configured problem with its invariants monitored.
std::vector<CheckResult> run_checks(const RunConfig& c, long steps);

struct OrderEstimate {
  std::string field;
  std::vector<double> differences;  // between successive levels
  double order = 0.0;               // NaN when the differences are at rounding level
};

struct ConvergenceReport {
  std::vector<int> resolutions;  // nx of each spatial level
  std::vector<double> time_steps;
  std::vector<OrderEstimate> spatial;
  std::vector<OrderEstimate> temporal;
};

/// Self-convergence study. Spatial: nx/4, nx/2, nx at the configured dt
/// (no adaptivity), finer solutions restricted by 2x2 averaging. Temporal:
/// dt, dt/2, dt/4 on the nx/4 grid. Fields phi and sigma at the final time.
ConvergenceReport convergence_study(const RunConfig& c, std::optional<long> max_steps = std::nullopt);

}  // namespace nschc
