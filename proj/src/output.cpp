#include "nschc/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace nschc {

namespace {

std::runtime_error io_error(const std::filesystem::path& path, const std::string& what) {
  return std::runtime_error("I/O error on '" + path.string() + "': " + what);
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols{
      "t",     "step",  "mass_phi", "mass_sigma", "E_kin",       "E_mix",      "E_ent",      "E_int",          "E_total",
      "D_visc", "D_mu", "D_sigma",  "min_sigma",  "max_abs_phi", "sep_margin", "sigma_linf", "energy_residual"};
  return cols;
}

std::string format_record(const DiagnosticsRecord& r) {
  std::string line;
  append_double(line, r.t);
  line += ',';
  line += std::to_string(r.step);
  for (double v : {r.mass_phi, r.mass_sigma, r.E_kin, r.E_mix, r.E_ent, r.E_int, r.E_total, r.D_visc, r.D_mu,
                   r.D_sigma, r.min_sigma, r.max_abs_phi, r.sep_margin, r.sigma_linf, r.energy_residual}) {
    line += ',';
    append_double(line, v);
  }
  return line;
}

TimeseriesWriter::TimeseriesWriter(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw io_error(path, "cannot open for writing");
  const auto& cols = timeseries_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out_ << (k ? "," : "") << cols[k];
  out_ << '\n';
}

void TimeseriesWriter::append(const DiagnosticsRecord& r) {
  out_ << format_record(r) << '\n';
  out_.flush();
  if (!out_) throw io_error(path_, "write failed");
}

void write_timeseries(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  TimeseriesWriter w(path);
  for (const auto& r : records) w.append(r);
}

std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");
  std::string line;
  std::getline(in, line);
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      v.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw io_error(path, "unparsable value '" + cell + "'");
    }
    if (v.size() != timeseries_columns().size()) throw io_error(path, "row with wrong column count");
    DiagnosticsRecord r;
    r.t = v[0];
    r.step = static_cast<long>(v[1]);
    double* fields[] = {&r.mass_phi, &r.mass_sigma, &r.E_kin,   &r.E_mix,       &r.E_ent,
                        &r.E_int,    &r.E_total,    &r.D_visc,  &r.D_mu,        &r.D_sigma,
                        &r.min_sigma, &r.max_abs_phi, &r.sep_margin, &r.sigma_linf, &r.energy_residual};
    for (std::size_t k = 0; k < 15; ++k) *fields[k] = v[k + 2];
    out.push_back(r);
  }
  return out;
}

void write_vtk(const std::filesystem::path& path, const SimState& s) {
  const Grid& g = s.phi.grid();
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  out << "# vtk DataFile Version 3.0\n"
      << "nschc snapshot t=" << s.t << " step=" << s.step << "\n"
      << "ASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g.nx << ' ' << g.ny << " 1\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "ORIGIN %.17g %.17g 0\n", 0.5 * g.hx(), 0.5 * g.hy());
  out << buf;
  std::snprintf(buf, sizeof buf, "SPACING %.17g %.17g 1\n", g.hx(), g.hy());
  out << buf;
  out << "POINT_DATA " << g.cells() << '\n';

  auto block = [&](const char* name, auto value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    std::string line;
    for (int j = 0; j < g.ny; ++j) {
      line.clear();
      for (int i = 0; i < g.nx; ++i) {
        if (i) line += ' ';
        append_double(line, value(i, j));
      }
      out << line << '\n';
    }
  };
  block("phi", [&](int i, int j) { return s.phi(i, j); });
  block("sigma", [&](int i, int j) { return s.sigma(i, j); });
  block("speed", [&](int i, int j) {
    const double u = 0.5 * (s.v.x(i, j) + s.v.x(i + 1, j));
    const double w = 0.5 * (s.v.y(i, j) + s.v.y(i, j + 1));
    return std::hypot(u, w);
  });
  const bool have_p = s.pressure.size() == g.cells();
  block("P", [&](int i, int j) { return have_p ? s.pressure(i, j) : 0.0; });
  if (!out) throw io_error(path, "write failed");
}

}  // namespace nschc
