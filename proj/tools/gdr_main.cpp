#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gdr/config.hpp"
#include "gdr/run.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out = "out";
  std::string preset;
  std::optional<std::size_t> nx;
  std::string schedule;
  std::string mode;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--preset", f.preset, "catalog preset name");
  cmd->add_option("--nx", f.nx, "number of space intervals");
  cmd->add_option("--schedule", f.schedule, "comma separated penalty intensities");
  cmd->add_option("--mode", f.mode,
                  "penalized | reflected_lower_pen_upper | projection | limit | suite");
}

gdr::RunConfig assemble(const Flags& f, bool suite) {
  gdr::RunConfig config;
  if (!f.config.empty()) {
    config = gdr::load_config(f.config);
    if (!f.preset.empty()) throw gdr::ConfigError("--preset", "cannot be combined with --config");
  } else if (!f.preset.empty()) {
    config = gdr::config_for_preset(f.preset);
  } else if (suite) {
    config.all_presets = true;
  } else {
    throw gdr::ConfigError("--preset", "solve needs --preset or --config");
  }
  if (suite) config.mode = gdr::RunMode::suite;
  if (!f.mode.empty()) {
    config.mode = gdr::run_mode_from_string(f.mode);
    if (suite && config.mode != gdr::RunMode::suite)
      throw gdr::ConfigError("--mode", "suite verb only runs suite mode");
  }
  if (f.nx) config.grid.nx = *f.nx;
  if (!f.schedule.empty()) config.schedule.intensities = gdr::parse_schedule(f.schedule);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized finite-difference solver for doubly reflected G-BSDEs"};
  app.require_subcommand(1);
  Flags solve_flags;
  Flags suite_flags;
  CLI::App* solve = app.add_subcommand("solve", "solve one problem and write CSV artifacts");
  CLI::App* suite = app.add_subcommand("suite", "run the structural checks (all presets by default)");
  CLI::App* presets = app.add_subcommand("presets", "list the preset catalog");
  add_flags(solve, solve_flags);
  add_flags(suite, suite_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gdr::kExitConfig;
  }

  if (presets->parsed()) {
    gdr::list_presets(std::cout);
    return gdr::kExitOk;
  }
  const bool is_suite = suite->parsed();
  const Flags& flags = is_suite ? suite_flags : solve_flags;
  gdr::RunConfig config;
  try {
    config = assemble(flags, is_suite);
  } catch (const gdr::ConfigError& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return gdr::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return gdr::kExitConfig;
  }
  return gdr::run(config, flags.out, std::cout);
}
