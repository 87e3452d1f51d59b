// nschc command-line driver: run | check | convergence.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nschc/driver.hpp"

using namespace nschc;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

std::string fmt_order(double v) {
  if (std::isnan(v)) return "n/a (differences at rounding level)";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void print_orders(const char* kind, const std::vector<OrderEstimate>& est) {
  for (const auto& e : est) {
    std::printf("%s order (%s): %s   differences %.3e %.3e\n", kind, e.field.c_str(), fmt_order(e.order).c_str(),
                e.differences[0], e.differences[1]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes / Cahn-Hilliard / chemotaxis solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<long> max_steps;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
    sub->add_option("--seed", seed, "seed for random initial data (overrides [ic] seed)");
    sub->add_option("--max-steps", max_steps, "stop after this many steps")->check(CLI::PositiveNumber);
  };
  CLI::App* run = app.add_subcommand("run", "run the configured simulation");
  CLI::App* check = app.add_subcommand("check", "validate the config, self-check operators, short monitored run");
  CLI::App* conv = app.add_subcommand("convergence", "spatial and temporal self-convergence study");
  add_common(run);
  add_common(check);
  add_common(conv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::config_error);
  }

  try {
    RunConfig c = apply_overrides(load_config(config_path), RunOverrides{out_dir, seed, max_steps});

    if (*run) {
      run_simulation(c, max_steps, std::cout);
      return 0;
    }
    if (*check) {
      const auto results = run_checks(c, max_steps.value_or(20));
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%s  %-32s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        ok = ok && r.passed;
      }
      return ok ? 0 : code(ExitCode::invariant_violation);
    }
    if (*conv) {
      const ConvergenceReport rep = convergence_study(c, max_steps);
      std::printf("grids %d %d %d, dt %.3e\n", rep.resolutions[0], rep.resolutions[1], rep.resolutions[2],
                  rep.time_steps[0]);
      print_orders("spatial", rep.spatial);
      print_orders("temporal", rep.temporal);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n" << describe(e);
    return code(ExitCode::config_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(classify(e));
  }
  return 0;
}
