#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nschc/coeffs.hpp"
#include "nschc/elliptic.hpp"
#include "nschc/grid.hpp"

namespace nschc {

struct GridConfig {
  int nx = 64;
  int ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  BoundaryMode bc = BoundaryMode::neumann_noslip;
};

struct TimeConfig {
  double dt = 1e-4;         // step size (upper bound when adaptive)
  double t_end = 0.1;
  int output_every = 100;   // VTK snapshot interval in steps; 0 disables snapshots
  bool adaptive = true;     // shrink dt to the transport limits
  double cfl_safety = 0.4;
};

struct IcConfig {
  std::string phi = "spinodal";  // spinodal | tanh_strip | cosine | constant | zero
  double phi_mean = 0.0;
  double phi_amplitude = 0.05;
  std::string sigma = "gaussian_bump";  // gaussian_bump | uniform | cosine | zero
  double sigma_offset = 1.0;
  double sigma_amplitude = 1.0;
  double sigma_width = 0.1;
  std::string velocity = "zero";  // zero | taylor_green
  double velocity_amplitude = 1.0;
  std::uint64_t seed = 1;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "vtk"};
};

struct RunConfig {
  GridConfig grid;
  ModelParams params;
  TimeConfig time;
  IcConfig ic;
  OutputConfig output;
  SolveControls solver;

  Grid make_grid() const;
  bool wants(std::string_view format) const;
};

bool operator==(const GridConfig&, const GridConfig&);
bool operator==(const TimeConfig&, const TimeConfig&);
bool operator==(const IcConfig&, const IcConfig&);
bool operator==(const OutputConfig&, const OutputConfig&);
bool operator==(const RunConfig&, const RunConfig&);

/// Parses and validates a configuration. Unknown sections or keys, syntax
/// errors, out-of-range values and hypothesis violations are collected and
/// thrown together as ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads a file and parses it; a missing file is a ConfigError too.
RunConfig load_config(const std::string& path);

/// Canonical text form: every key, fixed order, doubles with 17 significant
/// digits. parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Validation alone (used by parse_config and after CLI overrides).
void validate_config(const RunConfig& c);

/// FNV-1a 64-bit hash of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& c);

}  // namespace nschc
