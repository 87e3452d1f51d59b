#include "nschc/errors.hpp"

namespace nschc {

namespace {
std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "\n";
    if (i.line > 0) out += "line " + std::to_string(i.line) + ": ";
    if (!i.field.empty()) out += i.field + ": ";
    out += i.message;
  }
  return out.empty() ? "invalid configuration" : out;
}
}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

}  // namespace nschc
