#include "nschc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include "nschc/errors.hpp"

namespace nschc {

Grid RunConfig::make_grid() const { return Grid::make(grid.nx, grid.ny, grid.lx, grid.ly, grid.bc); }

bool RunConfig::wants(std::string_view format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

bool operator==(const GridConfig& a, const GridConfig& b) {
  return a.nx == b.nx && a.ny == b.ny && a.lx == b.lx && a.ly == b.ly && a.bc == b.bc;
}
bool operator==(const TimeConfig& a, const TimeConfig& b) {
  return a.dt == b.dt && a.t_end == b.t_end && a.output_every == b.output_every && a.adaptive == b.adaptive &&
         a.cfl_safety == b.cfl_safety;
}
bool operator==(const IcConfig& a, const IcConfig& b) {
  return a.phi == b.phi && a.phi_mean == b.phi_mean && a.phi_amplitude == b.phi_amplitude && a.sigma == b.sigma &&
         a.sigma_offset == b.sigma_offset && a.sigma_amplitude == b.sigma_amplitude &&
         a.sigma_width == b.sigma_width && a.velocity == b.velocity &&
         a.velocity_amplitude == b.velocity_amplitude && a.seed == b.seed;
}
bool operator==(const OutputConfig& a, const OutputConfig& b) {
  return a.directory == b.directory && a.formats == b.formats;
}
bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.grid == b.grid && a.params == b.params && a.time == b.time && a.ic == b.ic && a.output == b.output &&
         a.solver.tolerance == b.solver.tolerance && a.solver.max_iterations == b.solver.max_iterations;
}

namespace {

using Value = std::variant<double, bool, std::string, std::vector<std::string>>;

struct Entry {
  Value value;
  int line;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Reads a quoted string starting at s[pos] == '"'; returns the index after
// the closing quote.
std::optional<std::size_t> read_string(std::string_view s, std::size_t pos, std::string& out) {
  out.clear();
  for (std::size_t i = pos + 1; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\') {
      if (i + 1 >= s.size()) return std::nullopt;
      const char n = s[++i];
      if (n == '"' || n == '\\') out += n;
      else if (n == 'n') out += '\n';
      else if (n == 't') out += '\t';
      else return std::nullopt;
    } else if (c == '"') {
      return i + 1;
    } else {
      out += c;
    }
  }
  return std::nullopt;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

std::optional<Value> parse_value(const std::string& raw) {
  if (raw.empty()) return std::nullopt;
  if (raw == "true") return Value{true};
  if (raw == "false") return Value{false};
  if (raw.front() == '"') {
    std::string s;
    auto end = read_string(raw, 0, s);
    if (!end || trim(std::string_view(raw).substr(*end)) != "") return std::nullopt;
    return Value{s};
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') return std::nullopt;
    std::vector<std::string> items;
    std::string_view body = std::string_view(raw).substr(1, raw.size() - 2);
    std::size_t i = 0;
    while (true) {
      while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
      if (i >= body.size()) break;
      if (body[i] != '"') return std::nullopt;
      std::string item;
      auto end = read_string(body, i, item);
      if (!end) return std::nullopt;
      items.push_back(item);
      i = *end;
      while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
      if (i >= body.size()) break;
      if (body[i] != ',') return std::nullopt;
      ++i;
    }
    return Value{items};
  }
  double d = 0.0;
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return Value{d};
}

using Table = std::map<std::string, std::map<std::string, Entry>>;

Table tokenize(std::string_view text, std::vector<ConfigIssue>& issues) {
  Table table;
  std::string section;
  int lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        issues.push_back({lineno, "", "malformed section header '" + line + "'"});
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (table.count(section)) issues.push_back({lineno, section, "section repeated"});
      table[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({lineno, "", "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string rhs = trim(std::string_view(line).substr(eq + 1));
    const std::string field = section.empty() ? key : section + "." + key;
    if (section.empty()) {
      issues.push_back({lineno, field, "key outside of any section"});
      continue;
    }
    if (key.empty() || key.find_first_of(" \t\"") != std::string::npos) {
      issues.push_back({lineno, field, "invalid key"});
      continue;
    }
    auto value = parse_value(rhs);
    if (!value) {
      issues.push_back({lineno, field, "cannot parse value '" + rhs + "'"});
      continue;
    }
    auto& sec = table[section];
    if (sec.count(key)) issues.push_back({lineno, field, "key repeated"});
    sec[key] = Entry{*value, lineno};
  }
  return table;
}

// Pulls typed values out of the table, recording type errors, and reports
// whatever is left over as unknown.
class Reader {
 public:
  Reader(Table& t, std::vector<ConfigIssue>& issues) : table_(t), issues_(issues) {}

  void number(const std::string& sec, const std::string& key, double& out) {
    if (auto* e = take(sec, key)) {
      if (auto* d = std::get_if<double>(&e->value)) out = *d;
      else issues_.push_back({e->line, sec + "." + key, "expected a number"});
    }
  }
  void integer(const std::string& sec, const std::string& key, long long& out, long long lo, long long hi) {
    if (auto* e = take(sec, key)) {
      auto* d = std::get_if<double>(&e->value);
      if (!d || std::floor(*d) != *d || *d < static_cast<double>(lo) || *d > static_cast<double>(hi)) {
        issues_.push_back({e->line, sec + "." + key, "expected an integer in [" + std::to_string(lo) + ", " +
                                                         std::to_string(hi) + "]"});
      } else {
        out = static_cast<long long>(*d);
      }
    }
  }
  void boolean(const std::string& sec, const std::string& key, bool& out) {
    if (auto* e = take(sec, key)) {
      if (auto* b = std::get_if<bool>(&e->value)) out = *b;
      else issues_.push_back({e->line, sec + "." + key, "expected true or false"});
    }
  }
  void string(const std::string& sec, const std::string& key, std::string& out) {
    if (auto* e = take(sec, key)) {
      if (auto* s = std::get_if<std::string>(&e->value)) out = *s;
      else issues_.push_back({e->line, sec + "." + key, "expected a quoted string"});
    }
  }
  void strings(const std::string& sec, const std::string& key, std::vector<std::string>& out) {
    if (auto* e = take(sec, key)) {
      if (auto* s = std::get_if<std::vector<std::string>>(&e->value)) out = *s;
      else issues_.push_back({e->line, sec + "." + key, "expected a list of strings"});
    }
  }
  int line_of(const std::string& sec, const std::string& key) const {
    auto it = lines_.find(sec + "." + key);
    return it == lines_.end() ? 0 : it->second;
  }
  void report_unknown() {
    static const std::vector<std::string> known{"grid", "params", "time", "ic", "output", "solver"};
    for (auto& [sec, keys] : table_) {
      if (std::find(known.begin(), known.end(), sec) == known.end()) {
        issues_.push_back({0, sec, "unknown section"});
        continue;
      }
      for (auto& [key, e] : keys) issues_.push_back({e.line, sec + "." + key, "unknown key"});
    }
  }

 private:
  Entry* take(const std::string& sec, const std::string& key) {
    auto s = table_.find(sec);
    if (s == table_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    taken_ = k->second;
    lines_[sec + "." + key] = taken_.line;
    s->second.erase(k);
    return &taken_;
  }

  Table& table_;
  std::vector<ConfigIssue>& issues_;
  Entry taken_{};
  std::map<std::string, int> lines_;
};

bool one_of(const std::string& v, std::initializer_list<const char*> names) {
  return std::any_of(names.begin(), names.end(), [&](const char* n) { return v == n; });
}

std::vector<ConfigIssue> check(const RunConfig& c, const Reader* where) {
  std::vector<ConfigIssue> issues;
  auto line = [&](const std::string& sec, const std::string& key) { return where ? where->line_of(sec, key) : 0; };
  auto bad = [&](const std::string& sec, const std::string& key, const std::string& msg) {
    issues.push_back({line(sec, key), sec + "." + key, msg});
  };
  try {
    c.make_grid();
  } catch (const std::exception& e) {
    issues.push_back({0, "grid", e.what()});
  }
  if (!(c.time.dt > 0.0) || !std::isfinite(c.time.dt)) bad("time", "dt", "must be positive");
  if (!(c.time.t_end > 0.0) || !std::isfinite(c.time.t_end)) bad("time", "t_end", "must be positive");
  if (c.time.output_every < 0) bad("time", "output_every", "must be >= 0");
  if (!(c.time.cfl_safety > 0.0 && c.time.cfl_safety <= 1.0)) bad("time", "cfl_safety", "must be in (0, 1]");
  if (!(c.solver.tolerance > 0.0 && c.solver.tolerance < 1.0)) bad("solver", "tolerance", "must be in (0, 1)");
  if (c.solver.max_iterations < 1) bad("solver", "max_iterations", "must be >= 1");

  if (!one_of(c.ic.phi, {"spinodal", "tanh_strip", "cosine", "constant", "zero"}))
    bad("ic", "phi", "unknown generator '" + c.ic.phi + "'");
  if (!one_of(c.ic.sigma, {"gaussian_bump", "uniform", "cosine", "zero"}))
    bad("ic", "sigma", "unknown generator '" + c.ic.sigma + "'");
  if (!one_of(c.ic.velocity, {"zero", "taylor_green"}))
    bad("ic", "velocity", "unknown generator '" + c.ic.velocity + "'");
  if (c.ic.velocity == "taylor_green" && c.grid.bc != BoundaryMode::periodic)
    bad("ic", "velocity", "taylor_green needs bc = \"periodic\"");
  if (!(std::abs(c.ic.phi_mean) < 1.0)) bad("ic", "phi_mean", "must lie in (-1, 1)");
  if (!(c.ic.phi_amplitude >= 0.0)) bad("ic", "phi_amplitude", "must be >= 0");
  if (!(c.ic.sigma_offset >= 0.0)) bad("ic", "sigma_offset", "must be >= 0");
  if (!(c.ic.sigma_amplitude >= 0.0)) bad("ic", "sigma_amplitude", "must be >= 0");
  if (c.ic.sigma == "cosine" && c.ic.sigma_amplitude > c.ic.sigma_offset)
    bad("ic", "sigma_amplitude", "cosine sigma needs amplitude <= offset to stay nonnegative");
  if (!(c.ic.sigma_width > 0.0)) bad("ic", "sigma_width", "must be positive");
  for (const auto& f : c.output.formats)
    if (!one_of(f, {"csv", "vtk"})) bad("output", "formats", "unknown format '" + f + "'");

  const std::optional<double> mean =
      c.ic.phi == "zero" ? std::optional<double>(0.0) : std::optional<double>(c.ic.phi_mean);
  const ValidationReport rep = validate_hypotheses(c.params, mean);
  for (const auto& v : rep.violations()) issues.push_back({0, "params", v.id + " violated: " + v.detail});
  return issues;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::vector<ConfigIssue> issues;
  Table table = tokenize(text, issues);
  Reader r(table, issues);
  RunConfig c;

  long long ll = 0;
  ll = c.grid.nx;
  r.integer("grid", "nx", ll, 4, 1 << 15);
  c.grid.nx = static_cast<int>(ll);
  ll = c.grid.ny;
  r.integer("grid", "ny", ll, 4, 1 << 15);
  c.grid.ny = static_cast<int>(ll);
  r.number("grid", "lx", c.grid.lx);
  r.number("grid", "ly", c.grid.ly);
  std::string bc{to_string(c.grid.bc)};
  r.string("grid", "bc", bc);
  try {
    c.grid.bc = boundary_mode_from_string(bc);
  } catch (const std::exception& e) {
    issues.push_back({r.line_of("grid", "bc"), "grid.bc", e.what()});
  }

  auto& p = c.params;
  r.number("params", "rho1", p.rho1);
  r.number("params", "rho2", p.rho2);
  r.number("params", "nu1", p.nu1);
  r.number("params", "nu2", p.nu2);
  r.number("params", "m_star", p.m_star);
  r.number("params", "m_star_upper", p.m_star_upper);
  r.number("params", "theta", p.theta);
  r.number("params", "theta0", p.theta0);
  r.number("params", "chi", p.chi);
  r.number("params", "eps_int", p.eps_int);
  r.number("params", "eps_reg", p.eps_reg);

  r.number("time", "dt", c.time.dt);
  r.number("time", "t_end", c.time.t_end);
  ll = c.time.output_every;
  r.integer("time", "output_every", ll, 0, 1LL << 40);
  c.time.output_every = static_cast<int>(std::min<long long>(ll, 1 << 30));
  r.boolean("time", "adaptive", c.time.adaptive);
  r.number("time", "cfl_safety", c.time.cfl_safety);

  r.string("ic", "phi", c.ic.phi);
  r.number("ic", "phi_mean", c.ic.phi_mean);
  r.number("ic", "phi_amplitude", c.ic.phi_amplitude);
  r.string("ic", "sigma", c.ic.sigma);
  r.number("ic", "sigma_offset", c.ic.sigma_offset);
  r.number("ic", "sigma_amplitude", c.ic.sigma_amplitude);
  r.number("ic", "sigma_width", c.ic.sigma_width);
  r.string("ic", "velocity", c.ic.velocity);
  r.number("ic", "velocity_amplitude", c.ic.velocity_amplitude);
  ll = static_cast<long long>(c.ic.seed);
  r.integer("ic", "seed", ll, 0, (1LL << 53));
  c.ic.seed = static_cast<std::uint64_t>(ll);

  r.string("output", "directory", c.output.directory);
  r.strings("output", "formats", c.output.formats);

  r.number("solver", "tolerance", c.solver.tolerance);
  ll = c.solver.max_iterations;
  r.integer("solver", "max_iterations", ll, 1, 1 << 30);
  c.solver.max_iterations = static_cast<int>(ll);

  r.report_unknown();
  if (issues.empty()) {
    auto more = check(c, &r);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "", "cannot open config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  auto issues = check(c, nullptr);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  const auto& p = c.params;
  o << "[grid]\n"
    << "nx = " << c.grid.nx << "\n"
    << "ny = " << c.grid.ny << "\n"
    << "lx = " << fmt(c.grid.lx) << "\n"
    << "ly = " << fmt(c.grid.ly) << "\n"
    << "bc = " << quote(std::string(to_string(c.grid.bc))) << "\n\n";
  o << "[params]\n"
    << "rho1 = " << fmt(p.rho1) << "\n"
    << "rho2 = " << fmt(p.rho2) << "\n"
    << "nu1 = " << fmt(p.nu1) << "\n"
    << "nu2 = " << fmt(p.nu2) << "\n"
    << "m_star = " << fmt(p.m_star) << "\n"
    << "m_star_upper = " << fmt(p.m_star_upper) << "\n"
    << "theta = " << fmt(p.theta) << "\n"
    << "theta0 = " << fmt(p.theta0) << "\n"
    << "chi = " << fmt(p.chi) << "\n"
    << "eps_int = " << fmt(p.eps_int) << "\n"
    << "eps_reg = " << fmt(p.eps_reg) << "\n\n";
  o << "[time]\n"
    << "dt = " << fmt(c.time.dt) << "\n"
    << "t_end = " << fmt(c.time.t_end) << "\n"
    << "output_every = " << c.time.output_every << "\n"
    << "adaptive = " << (c.time.adaptive ? "true" : "false") << "\n"
    << "cfl_safety = " << fmt(c.time.cfl_safety) << "\n\n";
  o << "[ic]\n"
    << "phi = " << quote(c.ic.phi) << "\n"
    << "phi_mean = " << fmt(c.ic.phi_mean) << "\n"
    << "phi_amplitude = " << fmt(c.ic.phi_amplitude) << "\n"
    << "sigma = " << quote(c.ic.sigma) << "\n"
    << "sigma_offset = " << fmt(c.ic.sigma_offset) << "\n"
    << "sigma_amplitude = " << fmt(c.ic.sigma_amplitude) << "\n"
    << "sigma_width = " << fmt(c.ic.sigma_width) << "\n"
    << "velocity = " << quote(c.ic.velocity) << "\n"
    << "velocity_amplitude = " << fmt(c.ic.velocity_amplitude) << "\n"
    << "seed = " << c.ic.seed << "\n\n";
  o << "[output]\n"
    << "directory = " << quote(c.output.directory) << "\n"
    << "formats = [";
  for (std::size_t i = 0; i < c.output.formats.size(); ++i) o << (i ? ", " : "") << quote(c.output.formats[i]);
  o << "]\n\n";
  o << "[solver]\n"
    << "tolerance = " << fmt(c.solver.tolerance) << "\n"
    << "max_iterations = " << c.solver.max_iterations << "\n";
  return o.str();
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nschc
