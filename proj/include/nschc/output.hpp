#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nschc/coupled.hpp"

namespace nschc {

/// Column names of the time-series CSV, in DiagnosticsRecord field order.
const std::vector<std::string>& timeseries_columns();

std::string format_record(const DiagnosticsRecord& r);

/// Writes header plus one row per record (17 significant digits).
void write_timeseries(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

/// Streaming variant used during a run; rows are flushed as they arrive.
class TimeseriesWriter {
 public:
  explicit TimeseriesWriter(const std::filesystem::path& path);
  void append(const DiagnosticsRecord& r);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Legacy ASCII VTK snapshot (STRUCTURED_POINTS on cell centres) with
/// point arrays phi, sigma, speed (|v| at centres) and P.
void write_vtk(const std::filesystem::path& path, const SimState& s);

/// Parses a time-series CSV back into records (used by tests and tools).
std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path);

}  // namespace nschc
